#include "cevrp/svg.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cevrp {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kMargin = 32.0;

struct Mapper {
    double min_x, min_y, scale;

    Mapper(const Instance& inst) {
        double max_x, max_y;
        min_x = max_x = inst.coord(0).x;
        min_y = max_y = inst.coord(0).y;
        for (NodeId n = 1; n < inst.node_count(); ++n) {
            min_x = std::min(min_x, inst.coord(n).x);
            max_x = std::max(max_x, inst.coord(n).x);
            min_y = std::min(min_y, inst.coord(n).y);
            max_y = std::max(max_y, inst.coord(n).y);
        }
        const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
        scale = (kCanvas - 2.0 * kMargin) / span;
    }

    double x(const Point& p) const { return kMargin + (p.x - min_x) * scale; }
    // SVG y grows downward.
    double y(const Point& p) const { return kCanvas - kMargin - (p.y - min_y) * scale; }
};

const char* route_color(size_t r) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[r % (sizeof(palette) / sizeof(palette[0]))];
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << v;
    return out.str();
}

}  // namespace

std::string route_map_svg(const Instance& inst, const Tour& tour) {
    if (tour.seq.size() < 2) throw std::invalid_argument("route_map_svg: empty tour");
    const Mapper map(inst);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
        << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto spans = route_spans(tour.seq);
    for (size_t r = 0; r < spans.size(); ++r) {
        const auto [b, e] = spans[r];
        out << "<polyline fill=\"none\" stroke=\"" << route_color(r)
            << "\" stroke-width=\"1.5\" points=\"";
        out << fmt(map.x(inst.coord(0))) << ',' << fmt(map.y(inst.coord(0)));
        for (int i = b; i < e; ++i) {
            const auto& p = inst.coord(tour.seq[static_cast<size_t>(i)]);
            out << ' ' << fmt(map.x(p)) << ',' << fmt(map.y(p));
        }
        out << ' ' << fmt(map.x(inst.coord(0))) << ',' << fmt(map.y(inst.coord(0)));
        out << "\"/>\n";
    }

    for (NodeId c = 1; c <= inst.customer_count(); ++c) {
        const auto& p = inst.coord(c);
        out << "<circle class=\"customer\" cx=\"" << fmt(map.x(p)) << "\" cy=\"" << fmt(map.y(p))
            << "\" r=\"3\" fill=\"none\" stroke=\"gray\" stroke-width=\"1\"/>\n";
    }
    for (NodeId s = inst.customer_count() + 1; s < inst.node_count(); ++s) {
        const auto& p = inst.coord(s);
        out << "<circle class=\"station\" cx=\"" << fmt(map.x(p)) << "\" cy=\"" << fmt(map.y(p))
            << "\" r=\"4\" fill=\"black\"/>\n";
    }
    {
        const auto& p = inst.coord(0);
        out << "<circle class=\"depot\" cx=\"" << fmt(map.x(p)) << "\" cy=\"" << fmt(map.y(p))
            << "\" r=\"5\" fill=\"red\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string trace_svg(const RunRecord& record) {
    if (record.epochs.empty())
        throw std::invalid_argument("trace_svg: run record has no epoch trace");
    const double width = 900.0, height = 620.0, panel = 260.0, margin = 40.0;
    const size_t epochs = record.epochs.size();

    int max_sel = 1;
    double max_rew = 1.0;
    for (const auto& e : record.epochs) {
        for (int s : e.selections) max_sel = std::max(max_sel, s);
        for (double r : e.rewards) max_rew = std::max(max_rew, r);
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto panel_lines = [&](double top, auto value, double max_value, const char* label) {
        out << "<text x=\"" << margin << "\" y=\"" << fmt(top - 8) << "\" font-size=\"14\">"
            << label << "</text>\n";
        out << "<rect x=\"" << margin << "\" y=\"" << fmt(top) << "\" width=\""
            << fmt(width - 2 * margin) << "\" height=\"" << panel
            << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        for (int arm = 0; arm < kHeuristicPoolSize; ++arm) {
            out << "<polyline fill=\"none\" stroke=\"" << route_color(static_cast<size_t>(arm))
                << "\" stroke-width=\"1.2\" points=\"";
            for (size_t i = 0; i < epochs; ++i) {
                const double x =
                    margin + (width - 2 * margin) *
                                 (epochs == 1 ? 0.5
                                              : static_cast<double>(i) /
                                                    static_cast<double>(epochs - 1));
                const double v = value(record.epochs[i], arm) / max_value;
                const double y = top + panel - v * panel;
                if (i) out << ' ';
                out << fmt(x) << ',' << fmt(y);
            }
            out << "\"/>\n";
        }
    };

    panel_lines(
        margin + 10,
        [](const EpochTrace& e, int arm) {
            return static_cast<double>(e.selections[static_cast<size_t>(arm)]);
        },
        static_cast<double>(max_sel), "selections per local search");
    panel_lines(
        margin + panel + 70,
        [](const EpochTrace& e, int arm) { return e.rewards[static_cast<size_t>(arm)]; }, max_rew,
        "reward totals per local search");

    // Legend.
    const double ly = margin + 2 * panel + 110;
    for (int arm = 0; arm < kHeuristicPoolSize; ++arm) {
        const double lx = margin + 105.0 * arm;
        out << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" width=\"12\" height=\"12\" fill=\""
            << route_color(static_cast<size_t>(arm)) << "\"/>\n";
        out << "<text x=\"" << fmt(lx + 16) << "\" y=\"" << fmt(ly + 11)
            << "\" font-size=\"12\">" << HeuristicId{arm}.name() << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace cevrp

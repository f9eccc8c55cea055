#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "linked/harness.hpp"

namespace linked {

namespace {

struct SeriesPoint {
    int n = 0;
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

const char* strategy_color(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Maximal: return "#d62728";
        case StrategyKind::Uniform: return "#1f77b4";
        case StrategyKind::Ege: return "#2ca02c";
    }
    return "#000000";
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

double strategy_bound(StrategyKind kind, const GapProfile& profile, double delta) {
    switch (kind) {
        case StrategyKind::Maximal: return bound_maximal(profile, delta);
        case StrategyKind::Uniform: return bound_uniform(profile, delta);
        case StrategyKind::Ege: return bound_ege(profile, delta);
    }
    return 0.0;
}

}  // namespace

void emit_svg(const std::vector<RunResult>& rows, const ScenarioConfig& config,
              const std::string& path, const SvgOptions& options) {
    if (rows.empty()) {
        throw std::invalid_argument("emit_svg: empty result table");
    }

    // scenario -> strategy -> n -> plays samples
    std::map<std::string, std::map<StrategyKind, std::map<int, std::vector<double>>>> data;
    for (const RunResult& row : rows) {
        data[row.scenario][row.strategy][row.n].push_back(
            static_cast<double>(row.plays_total));
    }

    const double panel_w = 640, panel_h = 400;
    const double ml = 70, mr = 20, mt = 40, mb = 45;
    const int panels = static_cast<int>(data.size());

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel_w
        << "\" height=\"" << panel_h * panels << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    int panel_idx = 0;
    for (const auto& [scenario, by_strategy] : data) {
        const double top = panel_idx * panel_h;
        const double x0 = ml, x1 = panel_w - mr;
        const double y0 = top + mt, y1 = top + panel_h - mb;

        // Collect series and the plot ranges.
        std::map<StrategyKind, std::vector<SeriesPoint>> series;
        int n_min = 1 << 30, n_max = 0;
        double v_min = 1e300, v_max = 0.0;
        for (const auto& [strategy, by_n] : by_strategy) {
            for (const auto& [n, plays] : by_n) {
                SeriesPoint pt;
                pt.n = n;
                pt.lo = *std::min_element(plays.begin(), plays.end());
                pt.hi = *std::max_element(plays.begin(), plays.end());
                pt.mean = 0.0;
                for (double v : plays) pt.mean += v;
                pt.mean /= static_cast<double>(plays.size());
                pt.lo = std::max(pt.lo, 1.0);
                pt.mean = std::max(pt.mean, 1.0);
                series[strategy].push_back(pt);
                n_min = std::min(n_min, n);
                n_max = std::max(n_max, n);
                v_min = std::min(v_min, pt.lo);
                v_max = std::max(v_max, pt.hi);
            }
            std::sort(series[strategy].begin(), series[strategy].end(),
                      [](const SeriesPoint& a, const SeriesPoint& b) { return a.n < b.n; });
        }

        // Optional theoretical overlays, evaluated on the scenario means.
        std::map<StrategyKind, std::vector<SeriesPoint>> bound_series;
        std::vector<SeriesPoint> lower_series;
        if (options.bounds_overlay && config.kind != ScenarioKind::File) {
            std::vector<int> grid;
            for (const auto& [strategy, pts] : series) {
                for (const SeriesPoint& pt : pts) grid.push_back(pt.n);
            }
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            for (int n : grid) {
                const BanditInstance instance =
                    make_scenario(config.kind, n, config.best_index);
                const GapProfile profile = gap_profile(instance.means());
                for (const auto& [strategy, pts] : series) {
                    const double b = strategy_bound(strategy, profile, config.delta);
                    if (std::isfinite(b) && b > 0.0) {
                        bound_series[strategy].push_back({n, b, b, b});
                        v_min = std::min(v_min, b);
                        v_max = std::max(v_max, b);
                    }
                }
                const double lb = bound_lower(profile, config.delta);
                if (std::isfinite(lb) && lb > 0.0) {
                    lower_series.push_back({n, lb, lb, lb});
                    v_min = std::min(v_min, lb);
                    v_max = std::max(v_max, lb);
                }
            }
        }

        const double lx0 = n_min, lx1 = std::max(n_max, n_min + 1);
        const double ly0 = std::floor(std::log10(std::max(v_min, 1.0)));
        const double ly1 = std::ceil(std::log10(std::max(v_max, 10.0)));
        auto sx = [&](double n) {
            return x0 + (n - lx0) / (lx1 - lx0) * (x1 - x0);
        };
        auto sy = [&](double v) {
            const double l = std::log10(std::max(v, 1.0));
            return y1 - (l - ly0) / (ly1 - ly0) * (y1 - y0);
        };

        svg << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(top + 24)
            << "\" text-anchor=\"middle\" font-size=\"15\">" << scenario
            << " scenario, delta=" << config.delta << "</text>\n";

        // Axes and log-grid.
        svg << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y0) << "\" width=\""
            << coord(x1 - x0) << "\" height=\"" << coord(y1 - y0)
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int e = static_cast<int>(ly0); e <= static_cast<int>(ly1); ++e) {
            const double y = sy(std::pow(10.0, e));
            svg << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y) << "\" x2=\""
                << coord(x1) << "\" y2=\"" << coord(y)
                << "\" stroke=\"#dddddd\"/>\n";
            svg << "<text x=\"" << coord(x0 - 6) << "\" y=\"" << coord(y + 4)
                << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
        }
        for (const auto& [strategy, pts] : series) {
            (void)strategy;
            for (const SeriesPoint& pt : pts) {
                const double x = sx(pt.n);
                svg << "<text x=\"" << coord(x) << "\" y=\"" << coord(y1 + 16)
                    << "\" text-anchor=\"middle\" font-size=\"11\">" << pt.n
                    << "</text>\n";
            }
            break;  // x tick labels once
        }
        svg << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(y1 + 34)
            << "\" text-anchor=\"middle\" font-size=\"12\">arms n</text>\n";
        svg << "<text x=\"" << coord(x0 - 52) << "\" y=\"" << coord((y0 + y1) / 2)
            << "\" font-size=\"12\" transform=\"rotate(-90 " << coord(x0 - 52) << ' '
            << coord((y0 + y1) / 2) << ")\" text-anchor=\"middle\">mean plays</text>\n";

        // Data series with min/max whiskers.
        for (const auto& [strategy, pts] : series) {
            const char* color = strategy_color(strategy);
            std::ostringstream line;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                line << (i == 0 ? "" : " ") << coord(sx(pts[i].n)) << ','
                     << coord(sy(pts[i].mean));
            }
            svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
                << color << "\" stroke-width=\"2\"/>\n";
            for (const SeriesPoint& pt : pts) {
                const double x = sx(pt.n);
                svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(sy(pt.lo))
                    << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(sy(pt.hi))
                    << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
                svg << "<circle cx=\"" << coord(x) << "\" cy=\"" << coord(sy(pt.mean))
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
        }
        for (const auto& [strategy, pts] : bound_series) {
            const char* color = strategy_color(strategy);
            std::ostringstream line;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                line << (i == 0 ? "" : " ") << coord(sx(pts[i].n)) << ','
                     << coord(sy(pts[i].mean));
            }
            svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
                << color << "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
        }
        if (!lower_series.empty()) {
            std::ostringstream line;
            for (std::size_t i = 0; i < lower_series.size(); ++i) {
                line << (i == 0 ? "" : " ") << coord(sx(lower_series[i].n)) << ','
                     << coord(sy(lower_series[i].mean));
            }
            svg << "<polyline points=\"" << line.str()
                << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\" "
                   "stroke-dasharray=\"2,3\"/>\n";
        }

        // Legend.
        double ly = y0 + 14;
        for (const auto& [strategy, pts] : series) {
            (void)pts;
            const char* color = strategy_color(strategy);
            svg << "<line x1=\"" << coord(x0 + 10) << "\" y1=\"" << coord(ly)
                << "\" x2=\"" << coord(x0 + 34) << "\" y2=\"" << coord(ly)
                << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << coord(x0 + 40) << "\" y=\"" << coord(ly + 4)
                << "\" font-size=\"12\">" << to_string(strategy) << "</text>\n";
            ly += 16;
        }
        if (!bound_series.empty() || !lower_series.empty()) {
            svg << "<line x1=\"" << coord(x0 + 10) << "\" y1=\"" << coord(ly)
                << "\" x2=\"" << coord(x0 + 34) << "\" y2=\"" << coord(ly)
                << "\" stroke=\"#555555\" stroke-width=\"1.5\" "
                   "stroke-dasharray=\"6,4\"/>\n";
            svg << "<text x=\"" << coord(x0 + 40) << "\" y=\"" << coord(ly + 4)
                << "\" font-size=\"12\">theoretical (dashed; dotted = lower)</text>\n";
        }
        ++panel_idx;
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write SVG file: " + path);
    }
    out << svg.str();
    if (!out.flush()) {
        throw std::runtime_error("failed writing SVG file: " + path);
    }
}

}  // namespace linked

// io.hpp — sweep configuration, deterministic CSV/JSON/SVG emitters, and the
// drivers behind the CLI subcommands. Data files are byte-stable for a given
// config: fixed %.12g formatting, no timestamps (run metadata goes to a
// .meta.json sidecar), and write-to-temp + atomic rename.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qrm/eigensolve.hpp"
#include "qrm/model.hpp"
#include "qrm/zhang.hpp"

namespace qrm::io {

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct SweepConfig {
    std::vector<double> lambdas{0.3};   // lambda/omega per panel column
    double g_start{0.0};
    double g_stop{1.0};
    double g_step{0.01};
    std::size_t levels_per_parity{6};
    double rel_tol{1e-10};
    std::string out;
    std::size_t n_cap{16384};
};

inline void validate_sweep(const SweepConfig& c) {
    if (c.lambdas.empty()) throw UsageError("sweep: at least one lambda required");
    if (!(c.g_step > 0.0)) throw UsageError("sweep: g-step must be > 0");
    if (!(c.g_start <= c.g_stop)) throw UsageError("sweep: g-start must be <= g-stop");
    if (c.levels_per_parity < 1) throw UsageError("sweep: levels must be >= 1");
    if (!(c.rel_tol > 0.0)) throw UsageError("sweep: rel-tol must be > 0");
}

inline std::vector<double> g_grid(const SweepConfig& c) {
    std::vector<double> g;
    for (std::size_t i = 0;; ++i) {
        const double v = c.g_start + static_cast<double>(i) * c.g_step;
        if (v > c.g_stop + 0.5 * c.g_step) break;
        g.push_back(std::min(v, c.g_stop));
    }
    if (g.empty()) throw UsageError("sweep: empty g grid");
    return g;
}

// ----------------------------- formatting ---------------------------------

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ------------------------------ atomic files ------------------------------

inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// ------------------------------- CSV --------------------------------------

struct SpectrumRow {
    double g{0.0};
    Parity parity{Parity::plus};
    std::size_t index{0};
    double energy{0.0};
};

inline std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
    std::string s = "g,parity,index,energy\n";
    for (const auto& r : rows) {
        s += fmt12(r.g);
        s += ',';
        s += to_string(r.parity);
        s += ',';
        s += std::to_string(r.index);
        s += ',';
        s += fmt12(r.energy);
        s += '\n';
    }
    return s;
}

inline std::vector<SpectrumRow> parse_spectrum_csv(const std::string& text) {
    std::vector<SpectrumRow> rows;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "g,parity,index,energy")
        throw std::runtime_error("spectrum csv: bad header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        SpectrumRow r;
        std::getline(ls, field, ',');
        r.g = std::strtod(field.c_str(), nullptr);
        std::getline(ls, field, ',');
        r.parity = (field == "+1") ? Parity::plus : Parity::minus;
        std::getline(ls, field, ',');
        r.index = static_cast<std::size_t>(std::strtoul(field.c_str(), nullptr, 10));
        std::getline(ls, field, ',');
        r.energy = std::strtod(field.c_str(), nullptr);
        rows.push_back(r);
    }
    return rows;
}

struct ZhangRow {
    double g{0.0};
    Subspectrum sub{Subspectrum::II};
    Branch branch{Branch::minus};
    std::size_t n{0};
    double energy{0.0};
};

inline std::string zhang_csv(const std::vector<ZhangRow>& rows) {
    std::string s = "g,subspectrum,branch,n,energy\n";
    for (const auto& r : rows) {
        s += fmt12(r.g);
        s += ',';
        s += to_string(r.sub);
        s += ',';
        s += to_string(r.branch);
        s += ',';
        s += std::to_string(r.n);
        s += ',';
        s += fmt12(r.energy);
        s += '\n';
    }
    return s;
}

struct SummaryRow {
    double lambda{0.0};
    double g{0.0};
    double max_min_distance{0.0};   // max over true levels of distance to claimed
};

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string s = "lambda,g,max_min_distance\n";
    for (const auto& r : rows) {
        s += fmt12(r.lambda);
        s += ',';
        s += fmt12(r.g);
        s += ',';
        s += fmt12(r.max_min_distance);
        s += '\n';
    }
    return s;
}

// ------------------------------ config file -------------------------------

// Simple key=value text file; '#' starts a comment. Recognized keys:
// lambda (comma-separated list), g_start, g_stop, g_step, levels, rel_tol,
// out, n_cap.
inline std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("config: cannot read " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> vals;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str()) throw UsageError("config: bad number '" + item + "'");
        vals.push_back(v);
    }
    return vals;
}

// ------------------------------ sweep drivers -----------------------------

struct SpectrumSweep {
    std::vector<SpectrumRow> rows;                      // ordered by g, parity, index
    std::vector<std::pair<double, std::size_t>> n_used; // truncation per g
};

// True spectrum for one lambda across the g grid.
inline SpectrumSweep sweep_spectrum(const SweepConfig& c, double lambda) {
    validate_sweep(c);
    SpectrumSweep sweep;
    ConvergeOptions opt;
    opt.n_cap = c.n_cap;
    for (double g : g_grid(c)) {
        ModelParams p{1.0, g, lambda, 0.0};
        ConvergedSpectrum cs;
        try {
            cs = converge_spectrum(p, c.levels_per_parity, c.rel_tol, opt);
        } catch (const BudgetError& e) {
            throw BudgetError(std::string(e.what()) + " [at g=" + fmt_short(g) + "]");
        }
        for (Parity parity : {Parity::plus, Parity::minus})
            for (const Level& l : cs.spectrum.levels)
                if (l.parity == parity)
                    sweep.rows.push_back(SpectrumRow{g, parity, l.index, l.energy});
        sweep.n_used.emplace_back(g, cs.trunc.n_max);
    }
    return sweep;
}

struct CompareSweep {
    double lambda{0.0};
    SpectrumSweep truth;
    std::vector<ZhangRow> claimed;
    std::vector<SummaryRow> summary;
};

inline CompareSweep sweep_compare(const SweepConfig& c, double lambda) {
    CompareSweep cmp;
    cmp.lambda = lambda;
    cmp.truth = sweep_spectrum(c, lambda);

    // group true energies per g to size the claimed enumeration window
    std::map<double, std::vector<double>> true_by_g;
    for (const auto& r : cmp.truth.rows) true_by_g[r.g].push_back(r.energy);

    for (const auto& [g, energies] : true_by_g) {
        ModelParams p{1.0, g, lambda, 0.0};
        const double e_max = *std::max_element(energies.begin(), energies.end()) + 2.0;
        for (const AnalyticLevel& l : enumerate_zhang(p, e_max))
            cmp.claimed.push_back(ZhangRow{g, l.sub, l.branch, l.n, l.energy});
        double worst = 0.0;
        for (double e : energies) worst = std::max(worst, nearest_zhang(p, e).distance);
        cmp.summary.push_back(SummaryRow{lambda, g, worst});
    }
    return cmp;
}

// --------------------------------- SVG ------------------------------------

namespace detail {

struct PanelCurve {
    std::string color;
    std::vector<std::pair<double, double>> points;   // (g, E)
};

struct Panel {
    std::string id;          // "a", "b", ...
    std::string title;
    double x_min, x_max, y_min, y_max;
    std::vector<PanelCurve> curves;
};

inline std::string svg_panel(const Panel& p, double ox, double oy) {
    constexpr double W = 800.0, H = 600.0;
    constexpr double ml = 90.0, mr = 30.0, mt = 60.0, mb = 80.0;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto sx = [&](double x) { return ox + ml + (x - p.x_min) / (p.x_max - p.x_min) * pw; };
    auto sy = [&](double y) { return oy + mt + (p.y_max - y) / (p.y_max - p.y_min) * ph; };

    std::string s;
    s += "<g class=\"panel\" id=\"panel-" + p.id + "\">\n";
    s += "<rect x=\"" + fmt_short(ox + ml) + "\" y=\"" + fmt_short(oy + mt) + "\" width=\"" +
         fmt_short(pw) + "\" height=\"" + fmt_short(ph) +
         "\" fill=\"white\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_short(ox + ml + 10) + "\" y=\"" + fmt_short(oy + mt - 15) +
         "\" font-size=\"24\">(" + p.id + ") " + p.title + "</text>\n";
    s += "<text x=\"" + fmt_short(ox + ml + pw / 2) + "\" y=\"" + fmt_short(oy + H - 25) +
         "\" font-size=\"22\" text-anchor=\"middle\">g/ω</text>\n";
    s += "<text x=\"" + fmt_short(ox + 28) + "\" y=\"" + fmt_short(oy + mt + ph / 2) +
         "\" font-size=\"22\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         fmt_short(ox + 28) + " " + fmt_short(oy + mt + ph / 2) + ")\">E/ω</text>\n";

    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = p.x_min + (p.x_max - p.x_min) * i / n_ticks;
        const double fy = p.y_min + (p.y_max - p.y_min) * i / n_ticks;
        s += "<line x1=\"" + fmt_short(sx(fx)) + "\" y1=\"" + fmt_short(oy + mt + ph) +
             "\" x2=\"" + fmt_short(sx(fx)) + "\" y2=\"" + fmt_short(oy + mt + ph + 6) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt_short(sx(fx)) + "\" y=\"" + fmt_short(oy + mt + ph + 26) +
             "\" font-size=\"16\" text-anchor=\"middle\">" + fmt_short(fx) + "</text>\n";
        s += "<line x1=\"" + fmt_short(ox + ml - 6) + "\" y1=\"" + fmt_short(sy(fy)) +
             "\" x2=\"" + fmt_short(ox + ml) + "\" y2=\"" + fmt_short(sy(fy)) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt_short(ox + ml - 10) + "\" y=\"" + fmt_short(sy(fy) + 5) +
             "\" font-size=\"16\" text-anchor=\"end\">" + fmt_short(fy) + "</text>\n";
    }

    for (const PanelCurve& c : p.curves) {
        if (c.points.empty()) continue;
        s += "<polyline fill=\"none\" stroke=\"" + c.color + "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : c.points) s += fmt_short(sx(x)) + "," + fmt_short(sy(y)) + " ";
        s += "\"/>\n";
    }
    s += "</g>\n";
    return s;
}

}  // namespace detail

// Four-panel comparison figure: top row the converged spectra colored by
// parity (+1 red, -1 blue), bottom row the claimed ladders colored by model
// (JC red, AJC blue). One column per lambda.
inline std::string compare_svg(const std::vector<CompareSweep>& sweeps) {
    constexpr double W = 800.0, H = 600.0;
    const std::size_t cols = sweeps.size();
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    fmt_short(W * cols) + "\" height=\"" + fmt_short(2 * H) + "\" viewBox=\"0 0 " +
                    fmt_short(W * cols) + " " + fmt_short(2 * H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const std::string red = "#d62728", blue = "#1f77b4";
    for (std::size_t col = 0; col < cols; ++col) {
        const CompareSweep& cmp = sweeps[col];
        double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 1.0;
        bool first = true;
        for (const auto& r : cmp.truth.rows) {
            if (first) {
                x_min = x_max = r.g;
                y_min = y_max = r.energy;
                first = false;
            }
            x_min = std::min(x_min, r.g);
            x_max = std::max(x_max, r.g);
            y_min = std::min(y_min, r.energy);
            y_max = std::max(y_max, r.energy);
        }
        if (x_max == x_min) x_max = x_min + 1.0;
        const double pad = 0.05 * (y_max - y_min + 1e-12);
        y_min -= pad;
        y_max += pad;

        detail::Panel top;
        top.id = std::string(1, static_cast<char>('a' + col));
        top.title = "QRM spectrum, λ/ω=" + fmt_short(cmp.lambda);
        top.x_min = x_min;
        top.x_max = x_max;
        top.y_min = y_min;
        top.y_max = y_max;
        std::map<std::pair<int, std::size_t>, detail::PanelCurve> true_curves;
        for (const auto& r : cmp.truth.rows) {
            auto& c = true_curves[{sign_of(r.parity), r.index}];
            c.color = r.parity == Parity::plus ? red : blue;
            c.points.emplace_back(r.g, r.energy);
        }
        for (auto& [key, c] : true_curves) top.curves.push_back(std::move(c));

        detail::Panel bot = top;
        bot.id = std::string(1, static_cast<char>('a' + col + cols));
        bot.title = "claimed JC/AJC ladders, λ/ω=" + fmt_short(cmp.lambda);
        bot.curves.clear();
        std::map<std::tuple<int, int, std::size_t>, detail::PanelCurve> claim_curves;
        for (const auto& r : cmp.claimed) {
            if (r.energy < y_min || r.energy > y_max) continue;
            auto& c = claim_curves[{r.sub == Subspectrum::II ? 1 : 0,
                                    static_cast<int>(r.branch), r.n}];
            c.color = r.sub == Subspectrum::II ? red : blue;   // JC red, AJC blue
            c.points.emplace_back(r.g, r.energy);
        }
        for (auto& [key, c] : claim_curves) bot.curves.push_back(std::move(c));

        s += detail::svg_panel(top, W * col, 0.0);
        s += detail::svg_panel(bot, W * col, H);
    }
    s += "</svg>\n";
    return s;
}

}  // namespace qrm::io

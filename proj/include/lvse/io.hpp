#pragma once

// CSV and SVG output for wavefunction sets.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lvse/domain.hpp"
#include "lvse/eigensolve.hpp"

namespace lvse {

namespace fs = std::filesystem;

inline constexpr const char* kCsvHeader = "x,re_psi,im_psi,abs2";

namespace detail {

inline std::string format_g17(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos) s = digits > 0 ? "0." + std::string(digits, '0') : "0";
    return s;
}

inline void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace detail

inline std::string csv_text(const WaveFunction& wf) {
    std::string s = kCsvHeader;
    s += '\n';
    for (std::size_t j = 0; j < wf.size(); ++j) {
        const double re = wf[j].real(), im = wf[j].imag();
        s += detail::format_g17(wf.grid.x(j));
        s += ',';
        s += detail::format_g17(re);
        s += ',';
        s += detail::format_g17(im);
        s += ',';
        s += detail::format_g17(re * re + im * im);
        s += '\n';
    }
    return s;
}

inline std::string csv_name(int label) { return "psi_" + std::to_string(label) + ".csv"; }

/// One `psi_<label>.csv` per state; returns the file names written.
inline std::vector<std::string> emit_csv(const Spectrum& states, const fs::path& dir) {
    detail::ensure_dir(dir);
    std::vector<std::string> names;
    for (const auto& p : states.pairs) {
        names.push_back(csv_name(p.label));
        detail::write_file(dir / names.back(), csv_text(p.wf));
    }
    return names;
}

/// Reads a file written by emit_csv back into a wavefunction on the grid it spans.
inline WaveFunction read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError(path.string() + ": unexpected CSV header");
    std::vector<double> xs;
    std::vector<cplx> amp;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v[4];
        const char* p = line.c_str();
        for (int c = 0; c < 4; ++c) {
            char* end = nullptr;
            v[c] = std::strtod(p, &end);
            if (end == p || (c < 3 && *end != ',') || (c == 3 && *end != '\0'))
                throw IoError(path.string() + ": malformed row '" + line + "'");
            p = end + 1;
        }
        xs.push_back(v[0]);
        amp.emplace_back(v[1], v[2]);
    }
    if (xs.size() < 3) throw IoError(path.string() + ": fewer than three rows");
    Grid g = make_grid(xs.front(), xs.back(), xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (std::abs(g.x(j) - xs[j]) > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(xs[j])))
            throw IoError(path.string() + ": x column is not a uniform grid");
    return WaveFunction(std::move(g), std::move(amp));
}

// ---------------------------------------------------------------------------
// SVG

enum class Part { Re, Im, Abs2 };

inline std::string to_string(Part p) {
    switch (p) {
        case Part::Re: return "re";
        case Part::Im: return "im";
        case Part::Abs2: return "abs2";
    }
    return "re";
}

struct PlotOptions {
    std::string title;
    std::optional<std::pair<double, double>> x_range;  // crop; whole grid when empty
    std::string description;                           // emitted as <desc>
    std::string legend_prefix = "n=";
};

namespace detail {

inline double part_value(cplx z, Part p) {
    switch (p) {
        case Part::Re: return z.real();
        case Part::Im: return z.imag();
        case Part::Abs2: return std::norm(z);
    }
    return 0.0;
}

/// Tick positions at 1, 2 or 5 times a power of ten, about five per axis.
inline std::vector<double> nice_ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {2.0, 5.0, 10.0})
        if (raw > step) step = f * mag;
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

inline int tick_digits(const std::vector<double>& ticks) {
    if (ticks.size() < 2) return 2;
    const double step = ticks[1] - ticks[0];
    return std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace detail

/// Standalone SVG 1.1 line plot of one part of every state.
inline std::string render_svg(const Spectrum& states, Part part, const PlotOptions& opt) {
    if (states.pairs.empty()) throw DomainError("nothing to plot");
    const double W = 800, H = 500, left = 70, right = 130, top = 50, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;

    const Grid& g0 = states.pairs.front().wf.grid;
    double x_lo = g0.x_min(), x_hi = g0.x_max();
    if (opt.x_range) {
        x_lo = std::max(x_lo, opt.x_range->first);
        x_hi = std::min(x_hi, opt.x_range->second);
    }
    double y_lo = 0.0, y_hi = 0.0;
    for (const auto& p : states.pairs)
        for (std::size_t j = 0; j < p.wf.size(); ++j) {
            const double x = p.wf.grid.x(j);
            if (x < x_lo || x > x_hi) continue;
            const double y = detail::part_value(p.wf[j], part);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    if (y_hi - y_lo < 1e-300) {
        y_lo = -1.0;
        y_hi = 1.0;
    } else {
        const double pad = 0.05 * (y_hi - y_lo);
        y_lo -= pad;
        y_hi += pad;
    }
    const auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };
    const auto f2 = [](double v) { return detail::format_fixed(v, 2); };

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    s << "<title>" << detail::xml_escape(opt.title) << "</title>\n";
    if (!opt.description.empty()) s << "<desc>" << detail::xml_escape(opt.description) << "</desc>\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << f2(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << detail::xml_escape(opt.title) << "</text>\n";

    s << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
    const auto xt = detail::nice_ticks(x_lo, x_hi);
    const auto yt = detail::nice_ticks(y_lo, y_hi);
    const int xd = detail::tick_digits(xt), yd = detail::tick_digits(yt);
    for (double x : xt) {
        s << "<line x1=\"" << f2(sx(x)) << "\" y1=\"" << f2(top + ph) << "\" x2=\"" << f2(sx(x)) << "\" y2=\""
          << f2(top + ph + 5) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << f2(sx(x)) << "\" y=\"" << f2(top + ph + 18) << "\" text-anchor=\"middle\">"
          << detail::format_fixed(x, xd) << "</text>\n";
    }
    for (double y : yt) {
        s << "<line x1=\"" << f2(left - 5) << "\" y1=\"" << f2(sy(y)) << "\" x2=\"" << f2(left) << "\" y2=\""
          << f2(sy(y)) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << f2(left - 8) << "\" y=\"" << f2(sy(y) + 4) << "\" text-anchor=\"end\">"
          << detail::format_fixed(y, yd) << "</text>\n";
    }
    if (y_lo < 0.0 && y_hi > 0.0)
        s << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(sy(0)) << "\" x2=\"" << f2(left + pw) << "\" y2=\""
          << f2(sy(0)) << "\" stroke=\"#cccccc\"/>\n";
    s << "<rect x=\"" << f2(left) << "\" y=\"" << f2(top) << "\" width=\"" << f2(pw) << "\" height=\"" << f2(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << f2(left + pw / 2) << "\" y=\"" << f2(H - 10) << "\" text-anchor=\"middle\">x</text>\n";
    const char* ylabel = part == Part::Re ? "Re psi" : part == Part::Im ? "Im psi" : "|psi|^2";
    s << "<text x=\"18\" y=\"" << f2(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << f2(top + ph / 2) << ")\">" << ylabel << "</text>\n";
    s << "</g>\n";

    for (std::size_t i = 0; i < states.pairs.size(); ++i) {
        const auto& p = states.pairs[i];
        const char* color = detail::kPalette[i % std::size(detail::kPalette)];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t j = 0; j < p.wf.size(); ++j) {
            const double x = p.wf.grid.x(j);
            if (x < x_lo || x > x_hi) continue;
            if (!first) s << ' ';
            first = false;
            s << f2(sx(x)) << ',' << f2(sy(detail::part_value(p.wf[j], part)));
        }
        s << "\"/>\n";
        const double ly = top + 15 + 20 * static_cast<double>(i);
        s << "<line x1=\"" << f2(left + pw + 15) << "\" y1=\"" << f2(ly) << "\" x2=\"" << f2(left + pw + 45)
          << "\" y2=\"" << f2(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        s << "<text x=\"" << f2(left + pw + 52) << "\" y=\"" << f2(ly + 4)
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << opt.legend_prefix << p.label << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

inline void emit_svg(const Spectrum& states, Part part, const fs::path& path, const PlotOptions& opt) {
    if (path.has_parent_path()) detail::ensure_dir(path.parent_path());
    detail::write_file(path, render_svg(states, part, opt));
}

}  // namespace lvse

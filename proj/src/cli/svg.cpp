#include "cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "specrkhs/text_io.hpp"

namespace specrkhs::cli {

namespace {

constexpr int kRampSteps = 256;

// Five anchors of a perceptually ordered dark-to-light ramp, linearly interpolated.
std::array<std::array<int, 3>, kRampSteps> make_ramp() {
    const double anchors[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    std::array<std::array<int, 3>, kRampSteps> ramp{};
    for (int i = 0; i < kRampSteps; ++i) {
        const double t = 4.0 * i / (kRampSteps - 1);
        const int k = std::min(3, static_cast<int>(t));
        const double f = t - k;
        for (int c = 0; c < 3; ++c)
            ramp[i][c] = static_cast<int>(std::lround(anchors[k][c] + f * (anchors[k + 1][c] - anchors[k][c])));
    }
    return ramp;
}

std::string hex_color(const std::array<int, 3>& rgb) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::vector<double> distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > 1e-12 * std::max(1.0, std::fabs(x))) out.push_back(x);
    return out;
}

double min_gap(const std::vector<double>& v) {
    double g = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) g = (g == 0.0) ? v[i] - v[i - 1] : std::min(g, v[i] - v[i - 1]);
    return g > 0.0 ? g : 1.0;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string pseudospectrum_svg(const PseudospectrumResult& res, const std::string& title) {
    static const auto ramp = make_ramp();
    std::vector<double> re, im;
    for (const auto& z : res.grid) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    const auto ure = distinct(re), uim = distinct(im);
    const double dx = min_gap(ure), dy = min_gap(uim);
    const double x0 = ure.empty() ? 0.0 : ure.front() - dx / 2, x1 = ure.empty() ? 1.0 : ure.back() + dx / 2;
    const double y0 = uim.empty() ? 0.0 : uim.front() - dy / 2, y1 = uim.empty() ? 1.0 : uim.back() + dy / 2;

    const double plot = 480.0, margin = 60.0;
    const double sx = plot / std::max(x1 - x0, 1e-300), sy = plot / std::max(y1 - y0, 1e-300);
    const double scale = std::min(sx, sy);
    const double w = (x1 - x0) * scale, h = (y1 - y0) * scale;

    double lo = INFINITY, hi = -INFINITY;
    for (double t : res.tau)
        if (std::isfinite(t) && t > 0.0) {
            lo = std::min(lo, std::log10(t));
            hi = std::max(hi, std::log10(t));
        }
    if (!(hi > lo)) {
        lo = std::isfinite(lo) ? lo - 1.0 : -1.0;
        hi = lo + 2.0;
    }
    std::vector<bool> flagged(res.grid.size(), false);
    for (auto i : res.flagged) flagged[i] = true;

    std::ostringstream os;
    const double width = w + 2 * margin + 80, height = h + 2 * margin;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
       << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(margin / 2) << "\" font-family=\"sans-serif\" font-size=\"14\">"
       << title << " (log10 tau, eps = " << format_double(res.epsilon) << ")</text>\n";
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        const double px = margin + (res.grid[i].real() - dx / 2 - x0) * scale;
        const double py = margin + (y1 - res.grid[i].imag() - dy / 2) * scale;
        std::string color = "#bbbbbb";
        const double t = res.tau[i];
        if (std::isfinite(t)) {
            const double v = t > 0.0 ? std::clamp((std::log10(t) - lo) / (hi - lo), 0.0, 1.0) : 0.0;
            color = hex_color(ramp[static_cast<std::size_t>(std::lround(v * (kRampSteps - 1)))]);
        }
        os << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\"" << fmt(dx * scale) << "\" height=\""
           << fmt(dy * scale) << "\" fill=\"" << color << '"';
        if (flagged[i]) os << " stroke=\"red\" stroke-width=\"1\"";
        os << "/>\n";
    }
    // Axes frame with extent labels.
    os << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    const auto label = [&](double x, double y, const std::string& s, const char* anchor) {
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\""
           << anchor << "\">" << s << "</text>\n";
    };
    label(margin, margin + h + 16, fmt(x0), "start");
    label(margin + w, margin + h + 16, fmt(x1), "end");
    label(margin - 6, margin + h, fmt(y0), "end");
    label(margin - 6, margin + 10, fmt(y1), "end");
    label(margin + w / 2, margin + h + 32, "Re z", "middle");
    // Color bar.
    const double bx = margin + w + 20, bh = h / kRampSteps;
    for (int k = 0; k < kRampSteps; ++k)
        os << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(margin + h - (k + 1) * bh) << "\" width=\"16\" height=\""
           << fmt(bh + 0.5) << "\" fill=\"" << hex_color(ramp[static_cast<std::size_t>(k)]) << "\"/>\n";
    label(bx + 20, margin + 10, fmt(hi), "start");
    label(bx + 20, margin + h, fmt(lo), "start");
    os << "</svg>\n";
    return os.str();
}

} // namespace specrkhs::cli

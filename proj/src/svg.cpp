#include "qgan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qgan::svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 48;

std::ofstream open_svg(const std::string& path, const std::string& title) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write svg file: " + path);
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    return out;
}

} // namespace

void write_histogram(const std::string& path, const qsim::Pmf& target,
                     const qsim::Pmf& generated, const std::string& title) {
    if (target.size() != generated.size()) {
        throw std::invalid_argument("histogram series must have equal length");
    }
    std::ofstream out = open_svg(path, title);

    const int n = static_cast<int>(target.size());
    double max_p = 1e-9;
    for (int i = 0; i < n; ++i) {
        max_p = std::max({max_p, target.probs[i], generated.probs[i]});
    }
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const double group_w = plot_w / n;
    const double bar_w = group_w * 0.38;

    for (int i = 0; i < n; ++i) {
        const double x0 = kMarginLeft + i * group_w + group_w * 0.08;
        const double th = plot_h * target.probs[i] / max_p;
        const double gh = plot_h * generated.probs[i] / max_p;
        out << "<rect x=\"" << x0 << "\" y=\"" << kMarginTop + plot_h - th << "\" width=\""
            << bar_w << "\" height=\"" << th << "\" fill=\"#4472c4\"/>\n";
        out << "<rect x=\"" << x0 + bar_w + group_w * 0.06 << "\" y=\""
            << kMarginTop + plot_h - gh << "\" width=\"" << bar_w << "\" height=\"" << gh
            << "\" fill=\"#ed7d31\"/>\n";
        out << "<text x=\"" << kMarginLeft + (i + 0.5) * group_w << "\" y=\""
            << kHeight - kMarginBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << i
            << "</text>\n";
    }
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop + 4
        << "\" width=\"12\" height=\"12\" fill=\"#4472c4\"/>\n"
        << "<text x=\"" << kMarginLeft + 18 << "\" y=\"" << kMarginTop + 14
        << "\" font-family=\"sans-serif\" font-size=\"12\">target</text>\n"
        << "<rect x=\"" << kMarginLeft + 84 << "\" y=\"" << kMarginTop + 4
        << "\" width=\"12\" height=\"12\" fill=\"#ed7d31\"/>\n"
        << "<text x=\"" << kMarginLeft + 102 << "\" y=\"" << kMarginTop + 14
        << "\" font-family=\"sans-serif\" font-size=\"12\">generated</text>\n";
    out << "</svg>\n";
}

void write_curve(const std::string& path, const std::vector<double>& values,
                 const std::string& title) {
    if (values.empty()) {
        throw std::invalid_argument("curve needs at least one value");
    }
    std::ofstream out = open_svg(path, title);

    double lo = 1e300;
    double hi = 1e-300;
    for (double v : values) {
        const double clamped = std::max(v, 1e-12);
        lo = std::min(lo, clamped);
        hi = std::max(hi, clamped);
    }
    const double log_lo = std::floor(std::log10(lo));
    const double log_hi = std::ceil(std::log10(hi * 1.0000001));
    const double span = std::max(log_hi - log_lo, 1.0);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;

    for (int d = static_cast<int>(log_lo); d <= static_cast<int>(log_hi); ++d) {
        const double y = kMarginTop + plot_h * (1.0 - (d - log_lo) / span);
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << y << "\" x2=\""
            << kWidth - kMarginRight << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
            << "</text>\n";
    }

    std::ostringstream points;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x =
            kMarginLeft + plot_w * (values.size() == 1 ? 0.5
                                                       : static_cast<double>(i) /
                                                             (values.size() - 1));
        const double v = std::log10(std::max(values[i], 1e-12));
        const double y = kMarginTop + plot_h * (1.0 - (v - log_lo) / span);
        points << (i == 0 ? "" : " ") << x << ',' << y;
    }
    out << "<polyline points=\"" << points.str()
        << "\" fill=\"none\" stroke=\"#4472c4\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">epoch</text>\n";
    out << "</svg>\n";
}

} // namespace qgan::svg

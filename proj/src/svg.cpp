#include "horolab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace horolab {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 64.0, kRight = 20.0, kTop = 36.0, kBottom = 48.0;

const char* kColors[] = {"#1f6fb4", "#d1495b", "#3c8d5a", "#8d5fb4", "#b4843c", "#4c4c4c"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v, double pix_lo, double pix_hi) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        const double t = (h > l) ? (a - l) / (h - l) : 0.5;
        return pix_lo + t * (pix_hi - pix_lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            const int klo = static_cast<int>(std::floor(std::log10(lo)));
            const int khi = static_cast<int>(std::ceil(std::log10(hi)));
            for (int k = klo; k <= khi; ++k) {
                const double v = std::pow(10.0, k);
                if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
            }
            if (out.size() < 2) out = {lo, hi};
            return out;
        }
        const double span = hi - lo;
        if (span <= 0) return {lo};
        const double raw = span / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double mult : {1.0, 2.0, 5.0, 10.0})
            if (raw <= mult * mag) {
                step = mult * mag;
                break;
            }
        const double start = std::ceil(lo / step) * step;
        for (double v = start; v <= hi + 1e-12 * span; v += step) out.push_back(v);
        return out;
    }
};

} // namespace

std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style) {
    // collect plottable points
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    std::size_t usable = 0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("emit_plot: x/y length mismatch");
        if (!s.yerr.empty() && s.yerr.size() != s.y.size())
            throw std::invalid_argument("emit_plot: yerr length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (style.logx && !(s.x[i] > 0.0)) continue;
            if (style.logy && !(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
            ++usable;
        }
    }
    if (usable == 0) throw EmptySeries("emit_plot: no plottable points");
    if (xmin == xmax) {
        xmin -= style.logx ? 0.0 : 0.5;
        xmax += style.logx ? xmax * 0.5 : 0.5;
        if (style.logx) xmin = xmax / 4.0;
    }
    if (ymin == ymax) {
        ymin -= style.logy ? 0.0 : 0.5;
        ymax += style.logy ? ymax * 0.5 : 0.5;
        if (style.logy) ymin = ymax / 4.0;
    }

    Axis xaxis{xmin, xmax, style.logx};
    Axis yaxis{ymin, ymax, style.logy};
    const double px_lo = kLeft, px_hi = kWidth - kRight;
    const double py_lo = kHeight - kBottom, py_hi = kTop; // y grows upward

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kWidth) +
           "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
           fmt(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
           "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        svg += "<text x=\"" + fmt(kWidth / 2) +
               "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
               escape_xml(style.title) + "</text>\n";

    // frame
    svg += "<rect x=\"" + fmt(px_lo) + "\" y=\"" + fmt(py_hi) + "\" width=\"" +
           fmt(px_hi - px_lo) + "\" height=\"" + fmt(py_lo - py_hi) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";

    // ticks and grid
    for (double v : xaxis.ticks()) {
        const double px = xaxis.map(v, px_lo, px_hi);
        svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(py_lo) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(py_hi) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(py_lo + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(v) + "</text>\n";
    }
    for (double v : yaxis.ticks()) {
        const double py = yaxis.map(v, py_lo, py_hi);
        svg += "<line x1=\"" + fmt(px_lo) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(px_hi) +
               "\" y2=\"" + fmt(py) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(px_lo - 6) + "\" y=\"" + fmt(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(v) +
               "</text>\n";
    }
    if (!style.xlabel.empty())
        svg += "<text x=\"" + fmt((px_lo + px_hi) / 2) + "\" y=\"" + fmt(kHeight - 10) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape_xml(style.xlabel) + "</text>\n";
    if (!style.ylabel.empty())
        svg += "<text x=\"14\" y=\"" + fmt((py_lo + py_hi) / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(-90 14 " +
               fmt((py_lo + py_hi) / 2) + ")\">" + escape_xml(style.ylabel) + "</text>\n";

    // fit line in plotted coordinates
    if (style.fit) {
        auto to_plot_y = [&](double xv) {
            const double xx = style.logx ? std::log10(xv) : xv;
            const double yy = style.fit->intercept + style.fit->slope * xx;
            return style.logy ? std::pow(10.0, yy) : yy;
        };
        const double y1 = to_plot_y(xmin), y2 = to_plot_y(xmax);
        svg += "<line x1=\"" + fmt(xaxis.map(xmin, px_lo, px_hi)) + "\" y1=\"" +
               fmt(yaxis.map(std::clamp(y1, ymin, ymax), py_lo, py_hi)) + "\" x2=\"" +
               fmt(xaxis.map(xmax, px_lo, px_hi)) + "\" y2=\"" +
               fmt(yaxis.map(std::clamp(y2, ymin, ymax), py_lo, py_hi)) +
               "\" stroke=\"#888888\" stroke-dasharray=\"6 3\"/>\n";
    }

    int color = 0;
    for (const auto& s : series) {
        const char* stroke = kColors[color % 6];
        ++color;
        std::string path;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (style.logx && !(s.x[i] > 0.0)) continue;
            if (style.logy && !(s.y[i] > 0.0)) continue;
            const double px = xaxis.map(s.x[i], px_lo, px_hi);
            const double py = yaxis.map(s.y[i], py_lo, py_hi);
            path += (path.empty() ? "M" : " L") + std::string(" ") + fmt(px) + " " + fmt(py);
            if (!s.yerr.empty() && s.yerr[i] > 0.0) {
                const double lo = s.y[i] - s.yerr[i], hi = s.y[i] + s.yerr[i];
                const double py_l = (style.logy && !(lo > 0.0))
                                        ? py_lo
                                        : yaxis.map(std::clamp(lo, ymin, ymax), py_lo, py_hi);
                const double py_h = yaxis.map(std::clamp(hi, ymin, ymax), py_lo, py_hi);
                svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(py_l) + "\" x2=\"" + fmt(px) +
                       "\" y2=\"" + fmt(py_h) + "\" stroke=\"" + stroke + "\"/>\n";
            }
            svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) + "\" r=\"2.5\" fill=\"" +
                   stroke + "\"/>\n";
        }
        if (!path.empty())
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + stroke +
                   "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
        if (!s.label.empty())
            svg += "<text x=\"" + fmt(px_hi - 8) + "\" y=\"" + fmt(py_hi + 16.0 * color) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
                   stroke + "\">" + escape_xml(s.label) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace horolab

#include "svg.hpp"

#include "tsclust/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>

namespace tsclust::svg {

namespace {

constexpr double kPanelWidth = 320.0;
constexpr double kPanelHeight = 220.0;
constexpr double kPad = 36.0;
constexpr double kTitleHeight = 34.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
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

std::string header(double width, double height) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<!-- tsclust " + std::string(kVersion) + " -->\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    return s;
}

std::string text(double x, double y, std::string_view body, std::string_view extra = "") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\"" +
           (extra.empty() ? "" : " " + std::string(extra)) + ">" + escape(body) + "</text>\n";
}

std::string polyline(std::span<const double> values, double x0, double y0, double w, double h, double lo,
                     double hi, std::string_view style) {
    std::string pts;
    const double span = hi - lo;
    const double denom = values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        const double x = x0 + w * static_cast<double>(t) / denom;
        const double y = y0 + h - h * (values[t] - lo) / span;
        if (!pts.empty()) pts += ' ';
        pts += num(x) + "," + num(y);
    }
    return "<polyline fill=\"none\" " + std::string(style) + " points=\"" + pts + "\"/>\n";
}

}  // namespace

std::string cluster_panels(const Dataset& dataset, const ClusterModel& model, std::string_view title) {
    const int k = model.k;
    const int cols = std::min(k, 3);
    const int rows = (k + cols - 1) / cols;
    const double width = cols * kPanelWidth;
    const double height = kTitleHeight + rows * kPanelHeight;
    std::string s = header(width, height);
    s += text(width / 2, 22, title, "text-anchor=\"middle\" font-size=\"15\"");

    for (int c = 0; c < k; ++c) {
        const double px = (c % cols) * kPanelWidth;
        const double py = kTitleHeight + (c / cols) * kPanelHeight;
        const double x0 = px + kPad, y0 = py + 24, w = kPanelWidth - kPad - 12, h = kPanelHeight - 24 - 28;

        const auto& center = model.centers[static_cast<std::size_t>(c)];
        double lo = *std::min_element(center.begin(), center.end());
        double hi = *std::max_element(center.begin(), center.end());
        int size = 0;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (model.labels[i] != c) continue;
            ++size;
            for (double v : dataset[i].values()) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (hi - lo < 1e-12) {
            lo -= 1.0;
            hi += 1.0;
        }

        s += "<g>\n";
        s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        s += text(px + kPanelWidth / 2, py + 16,
                  "cluster " + std::to_string(c) + " (n=" + std::to_string(size) + ")",
                  "text-anchor=\"middle\"");
        s += text(x0 - 4, y0 + 10, num(hi), "text-anchor=\"end\" font-size=\"10\"");
        s += text(x0 - 4, y0 + h, num(lo), "text-anchor=\"end\" font-size=\"10\"");
        s += text(x0, y0 + h + 14, "0", "font-size=\"10\"");
        s += text(x0 + w, y0 + h + 14, std::to_string(dataset.length() - 1), "text-anchor=\"end\" font-size=\"10\"");
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (model.labels[i] != c) continue;
            s += polyline(dataset[i].span(), x0, y0, w, h, lo, hi,
                          "stroke=\"#888888\" stroke-opacity=\"0.45\" stroke-width=\"1\"");
        }
        s += polyline(center, x0, y0, w, h, lo, hi, "stroke=\"red\" stroke-width=\"2.5\"");
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string agreement_heatmap(const AgreementReport& report, std::string_view row_title,
                              std::string_view column_title) {
    const auto& m = report.contingency;
    const std::size_t ka = m.size();
    const std::size_t kb = ka == 0 ? 0 : m[0].size();
    constexpr double cell = 64.0, left = 120.0, top = 86.0;
    const double width = left + kb * cell + 30, height = top + ka * cell + 30;
    int peak = 1;
    for (const auto& row : m)
        for (int v : row) peak = std::max(peak, v);

    std::string s = header(width, height);
    s += text(width / 2, 22, "Agreement (ARI " + num(report.ari) + ")", "text-anchor=\"middle\" font-size=\"15\"");
    s += text(left + kb * cell / 2, 50, column_title, "text-anchor=\"middle\"");
    s += text(16, top + ka * cell / 2, row_title,
              "text-anchor=\"middle\" transform=\"rotate(-90 16 " + num(top + ka * cell / 2) + ")\"");
    for (std::size_t j = 0; j < kb; ++j)
        s += text(left + (j + 0.5) * cell, top - 8, std::to_string(j), "text-anchor=\"middle\"");
    for (std::size_t i = 0; i < ka; ++i) {
        s += text(left - 8, top + (i + 0.5) * cell + 4, std::to_string(i), "text-anchor=\"end\"");
        for (std::size_t j = 0; j < kb; ++j) {
            const double f = static_cast<double>(m[i][j]) / peak;
            // White to dark blue.
            const int r = static_cast<int>(std::lround(255 - f * (255 - 8)));
            const int g = static_cast<int>(std::lround(255 - f * (255 - 81)));
            const int b = static_cast<int>(std::lround(255 - f * (255 - 156)));
            char fill[8];
            std::snprintf(fill, sizeof fill, "#%02x%02x%02x", r, g, b);
            const double x = left + j * cell, y = top + i * cell;
            s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" +
                 num(cell) + "\" fill=\"" + fill + "\" stroke=\"#cccccc\"/>\n";
            s += text(x + cell / 2, y + cell / 2 + 5, std::to_string(m[i][j]),
                      std::string("text-anchor=\"middle\" fill=\"") + (f > 0.5 ? "white" : "black") + "\"");
        }
    }
    for (const auto& c : report.consensus) {
        const double x = left + c.label_b * cell, y = top + c.label_a * cell;
        s += "<rect x=\"" + num(x + 1.5) + "\" y=\"" + num(y + 1.5) + "\" width=\"" + num(cell - 3) +
             "\" height=\"" + num(cell - 3) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace tsclust::svg

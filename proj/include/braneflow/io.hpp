#pragma once

// Serialization helpers: CSV with '.' decimal and ',' separator, and a small
// self-contained SVG quiver renderer. Numerical outputs never depend on SVG.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "braneflow/flow.hpp"

namespace braneflow {

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : path_(path), out_(path) {
        if (!out_)
            throw std::runtime_error("cannot open for writing: " + path.string());
        out_.imbue(std::locale::classic());
        out_ << std::setprecision(17);
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    void row(const std::vector<std::optional<double>>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ",";
            if (values[i]) out_ << *values[i];  // undefined values stay empty, never 0
        }
        out_ << "\n";
        if (!out_) throw std::runtime_error("write failed: " + path_.string());
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// Render a sampled vector field as an SVG quiver plot. Arrow shade encodes
/// speed. The output is standalone XML with no external references.
inline void write_field_svg(const std::filesystem::path& path,
                            const std::vector<FieldSample>& grid, const Rectangle& bounds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.imbue(std::locale::classic());
    const double size = 600.0;
    const double margin = 20.0;
    const double span_u = bounds.u_max - bounds.u_min;
    const double span_v = bounds.v_max - bounds.v_min;
    const auto px = [&](double u) { return margin + (u - bounds.u_min) / span_u * size; };
    const auto py = [&](double v) { return margin + (bounds.v_max - v) / span_v * size; };

    double vmax = 1e-300;
    for (const auto& s : grid) vmax = std::max(vmax, s.speed);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin
        << "\" height=\"" << size + 2 * margin << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double arrow = 0.8 * size / std::max(1.0, std::sqrt(static_cast<double>(grid.size())));
    for (const auto& s : grid) {
        if (s.speed == 0.0) continue;
        const double x0 = px(s.p.u), y0 = py(s.p.v);
        const double dx = s.X.du / s.speed * arrow, dy = -s.X.dv / s.speed * arrow;
        const int shade = static_cast<int>(220.0 * (1.0 - s.speed / vmax));
        out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 + dx << "\" y2=\""
            << y0 + dy << "\" stroke=\"rgb(" << 255 - shade << "," << shade / 3 << "," << shade
            << ")\" stroke-width=\"1.5\"/>\n";
        // arrowhead
        const double hx = dx * 0.25, hy = dy * 0.25;
        out << "<line x1=\"" << x0 + dx << "\" y1=\"" << y0 + dy << "\" x2=\""
            << x0 + dx - hx - hy * 0.6 << "\" y2=\"" << y0 + dy - hy + hx * 0.6
            << "\" stroke=\"rgb(" << 255 - shade << "," << shade / 3 << "," << shade
            << ")\" stroke-width=\"1.5\"/>\n";
        out << "<line x1=\"" << x0 + dx << "\" y1=\"" << y0 + dy << "\" x2=\""
            << x0 + dx - hx + hy * 0.6 << "\" y2=\"" << y0 + dy - hy - hx * 0.6
            << "\" stroke=\"rgb(" << 255 - shade << "," << shade / 3 << "," << shade
            << ")\" stroke-width=\"1.5\"/>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace braneflow

#include "nestlab/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nestlab/errors.hpp"

namespace nestlab {

namespace {

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void svg_header(std::string& s, int w, int h) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
         "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::string& s, int w, int h, const std::string& xlabel, const std::string& ylabel) {
    s += "<line x1=\"50\" y1=\"" + std::to_string(h - 30) + "\" x2=\"" + std::to_string(w - 10) +
         "\" y2=\"" + std::to_string(h - 30) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"50\" y1=\"10\" x2=\"50\" y2=\"" + std::to_string(h - 30) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" + std::to_string(h - 8) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + "</text>\n";
    s += "<text x=\"15\" y=\"" + std::to_string(h / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         std::to_string(h / 2) + ")\">" + ylabel + "</text>\n";
}

} // namespace

std::string render_bifurcation_svg(const std::vector<double>& a_values, int transient,
                                   int plot_points, int width, int height) {
    std::string s;
    svg_header(s, width, height);
    axes(s, width, height, "a", "x");
    if (!a_values.empty()) {
        double a_min = a_values.front(), a_max = a_values.front();
        for (double a : a_values) {
            a_min = std::min(a_min, a);
            a_max = std::max(a_max, a);
        }
        double span = std::max(a_max - a_min, 1e-12);
        double x0 = 50, x1 = static_cast<double>(width - 10);
        double y0 = static_cast<double>(height - 30), y1 = 10;
        for (double a : a_values) {
            double px = x0 + (a - a_min) / span * (x1 - x0);
            double x = 0.0; // critical orbit explores the attractor
            for (int k = 0; k < transient; ++k) x = a - 1.0 - a * x * x;
            for (int k = 0; k < plot_points; ++k) {
                x = a - 1.0 - a * x * x;
                double py = y0 + (x + 1.0) / 2.0 * (y1 - y0);
                s += "<circle cx=\"" + coord(px) + "\" cy=\"" + coord(py) +
                     "\" r=\"0.6\" fill=\"black\" fill-opacity=\"0.5\"/>\n";
            }
        }
    }
    s += "</svg>\n";
    return s;
}

std::string render_nest_svg(const nlohmann::json& report, bool log_scale, int width, int height) {
    if (!report.contains("levels") || !report["levels"].is_array())
        throw SchemaError("nest report missing levels array");
    std::string s;
    svg_header(s, width, height);
    const auto& levels = report["levels"];
    if (levels.empty()) {
        axes(s, width, height, "x", "level");
        s += "</svg>\n";
        return s;
    }
    double b0 = std::abs(std::stod(levels[0]["hi"].get<std::string>()));
    if (b0 <= 0.0) throw SchemaError("degenerate base interval");
    double floor_scale = b0 * 1e-14;
    auto xmap = [&](double v) -> double {
        double t;
        if (log_scale) {
            double mag = std::log1p(std::abs(v) / floor_scale) / std::log1p(b0 / floor_scale);
            t = 0.5 + 0.5 * (v < 0 ? -mag : mag);
        } else {
            t = (v / b0 + 1.0) / 2.0;
        }
        return 60.0 + t * (static_cast<double>(width) - 80.0);
    };
    double row_h = (static_cast<double>(height) - 60.0) / static_cast<double>(levels.size());
    size_t idx = 0;
    for (const auto& L : levels) {
        double y = 20.0 + static_cast<double>(idx) * row_h;
        double hh = std::max(row_h - 10.0, 4.0);
        double lo = std::stod(L["lo"].get<std::string>());
        double hi = std::stod(L["hi"].get<std::string>());
        s += "<rect x=\"" + coord(xmap(lo)) + "\" y=\"" + coord(y) + "\" width=\"" +
             coord(std::max(xmap(hi) - xmap(lo), 0.8)) + "\" height=\"" + coord(hh) +
             "\" fill=\"none\" stroke=\"black\"/>\n";
        if (L.contains("branches"))
            for (const auto& br : L["branches"]) {
                double blo = std::stod(br["lo"].get<std::string>());
                double bhi = std::stod(br["hi"].get<std::string>());
                s += "<rect x=\"" + coord(xmap(blo)) + "\" y=\"" + coord(y + 2) + "\" width=\"" +
                     coord(std::max(xmap(bhi) - xmap(blo), 0.6)) + "\" height=\"" +
                     coord(hh - 4) + "\" fill=\"steelblue\" fill-opacity=\"0.55\"/>\n";
            }
        double clo = std::stod(L["central_lo"].get<std::string>());
        double chi = std::stod(L["central_hi"].get<std::string>());
        s += "<rect x=\"" + coord(xmap(clo)) + "\" y=\"" + coord(y + 2) + "\" width=\"" +
             coord(std::max(xmap(chi) - xmap(clo), 0.6)) + "\" height=\"" + coord(hh - 4) +
             "\" fill=\"firebrick\" fill-opacity=\"0.6\"/>\n";
        if (L.contains("gape_lo")) {
            double glo = std::stod(L["gape_lo"].get<std::string>());
            double ghi = std::stod(L["gape_hi"].get<std::string>());
            s += "<rect x=\"" + coord(xmap(glo)) + "\" y=\"" + coord(y) + "\" width=\"" +
                 coord(std::max(xmap(ghi) - xmap(glo), 0.6)) + "\" height=\"" + coord(hh) +
                 "\" fill=\"none\" stroke=\"darkorange\" stroke-dasharray=\"3 2\"/>\n";
        }
        s += "<text x=\"8\" y=\"" + coord(y + hh / 2.0) + "\" font-size=\"11\">I" +
             std::to_string(idx) + "</text>\n";
        ++idx;
    }
    s += "</svg>\n";
    return s;
}

void render_file(const std::string& in_path, const std::string& format,
                 const std::string& out_path, bool log_scale) {
    std::ifstream in(in_path);
    if (!in) throw SchemaError("cannot open input: " + in_path);
    std::string svg;
    if (format == "svg-bifurcation") {
        std::vector<double> a_values;
        std::string line;
        bool saw_version = false;
        while (std::getline(in, line)) {
            if (line.rfind("nestlab-csv", 0) == 0) {
                saw_version = true;
                continue;
            }
            if (line.empty() || line[0] == '#' || line.rfind("a,", 0) == 0) continue;
            size_t comma = line.find(',');
            try {
                a_values.push_back(std::stod(line.substr(0, comma)));
            } catch (const std::exception&) {
                throw SchemaError("malformed CSV row: " + line);
            }
        }
        if (!saw_version) throw SchemaError("input is not a nestlab scan CSV");
        svg = render_bifurcation_svg(a_values);
    } else if (format == "svg-nest-intervals") {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw SchemaError(std::string("invalid JSON: ") + e.what());
        }
        svg = render_nest_svg(j, log_scale);
    } else {
        throw SchemaError("unknown render format: " + format);
    }
    std::ofstream out(out_path);
    if (!out) throw SchemaError("cannot open output: " + out_path);
    out << svg;
}

} // namespace nestlab

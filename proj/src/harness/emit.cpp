#include "npgap/harness/emit.hpp"

#include "npgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace npgap {

PlotSeries parse_plot(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
        throw ConfigError("plot: expected COLX:COLY, got '" + spec + "'");
    PlotSeries s{spec.substr(0, colon), spec.substr(colon + 1)};
    SweepRow probe;
    (void)column_value(probe, s.x);
    (void)column_value(probe, s.y);
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += "\n";
    }
    return out;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::vector<std::string> header;
    for (const auto& c : sweep_columns()) header.push_back(c.name);
    std::vector<std::vector<double>> data;
    for (const auto& r : rows) {
        std::vector<double> v;
        for (const auto& c : sweep_columns()) v.push_back(r.*(c.field));
        data.push_back(std::move(v));
    }
    return to_csv(header, data);
}

nlohmann::json row_json(const SweepRow& row) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& c : sweep_columns()) j[c.name] = row.*(c.field);
    return j;
}

nlohmann::json fit_json(const std::vector<SweepRow>& rows, const std::string& x, const std::string& y,
                        bool exclude_largest) {
    nlohmann::json j = {{"x", x}, {"y", y}, {"exclude_largest", exclude_largest}};
    try {
        RateFit f = fit_rate(rows, x, y, exclude_largest);
        j["slope"] = f.slope;
        j["intercept"] = f.intercept;
        j["r2"] = f.r2;
        j["points"] = f.points;
    } catch (const DomainError& e) {
        j["error"] = e.what();
    }
    return j;
}

nlohmann::json sweep_report(const ExperimentConfig& config, const SweepResult& result) {
    nlohmann::json j;
    j["name"] = config.name;
    j["config"] = config.raw;
    j["problem"] = config.problem == Problem::conducting ? "conducting" : "insulating";
    j["rows"] = nlohmann::json::array();
    for (const auto& r : result.rows) j["rows"].push_back(row_json(r));
    j["failures"] = nlohmann::json::array();
    for (const auto& f : result.failures) j["failures"].push_back({{"eps", f.eps}, {"kind", f.kind}, {"message", f.message}});
    j["fits"] = nlohmann::json::array();
    if (result.rows.size() >= 3) {
        for (const char* y : {"max_grad_u", "hg", "q_gap", "c_eps", "max_grad_b", "max_grad_r", "max_grad_v",
                              "sup_grad_u"})
            j["fits"].push_back(fit_json(result.rows, "eps", y, config.exclude_largest));
    }
    return j;
}

std::string svg_plot(const std::vector<SweepRow>& rows, const std::vector<PlotSeries>& series, const std::string& title) {
    if (rows.empty()) throw DomainError("svg_plot: no rows");
    const double W = 640, H = 480, L = 70, R = 160, T = 40, B = 50;
    struct Pts {
        std::vector<std::pair<double, double>> p;
    };
    std::vector<Pts> data;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        Pts d;
        for (const auto& r : rows) {
            double x = column_value(r, s.x), y = std::abs(column_value(r, s.y));
            if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) continue;
            d.p.emplace_back(std::log10(x), std::log10(y));
            x0 = std::min(x0, d.p.back().first);
            x1 = std::max(x1, d.p.back().first);
            y0 = std::min(y0, d.p.back().second);
            y1 = std::max(y1, d.p.back().second);
        }
        std::sort(d.p.begin(), d.p.end());
        data.push_back(std::move(d));
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << title << " (log10 axes)</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 100) / 100) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_double(std::round(yv * 100) / 100) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = colors[s % 6];
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < data[s].p.size(); ++k)
            o << (k ? " " : "") << px(data[s].p[k].first) << "," << py(data[s].p[k].second);
        o << "\"/>\n";
        double ly = T + 16 + 18 * double(s);
        o << "<text x=\"" << W - R + 10 << "\" y=\"" << ly << "\" fill=\"" << col << "\">" << series[s].y << " vs "
          << series[s].x << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::error_code ec;
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace npgap

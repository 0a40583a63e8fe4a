#include "dgschwarz/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace dgschwarz {

namespace {

std::string num(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

}  // namespace

std::string results_csv(const ResultsTable& table) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : table.rows) {
    out << r.experiment << ',' << r.n_fine << ',' << r.n_coarse << ',' << num(r.h) << ',' << num(r.H) << ',' << r.p
        << ',' << r.q << ',' << num(r.rho_e) << ',' << num(r.K) << ',' << r.iterations << ',' << num(r.bound_factor)
        << '\n';
  }
  return out.str();
}

void write_results(const ResultsTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << results_csv(table);
}

std::string summary_json(const ResultsTable& table) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& s : table.summary) j[s.name] = s.value;
  return j.dump(2) + "\n";
}

namespace {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Chart {
  std::string x_label;
  std::vector<Series> series;
};

double x_of(const ResultRow& r, std::string& label) {
  if (r.experiment.rfind("example1", 0) == 0) {
    label = "rho_e";
    return r.rho_e;
  }
  if (r.experiment == "example2" || r.experiment == "example4") {
    label = "H/h (nominal)";
    return std::sqrt(static_cast<double>(r.n_fine) / r.n_coarse);
  }
  if (r.experiment == "unprec_h") {
    label = "1/h";
    return 1.0 / r.h;
  }
  label = "p";
  return r.p;
}

std::string series_of(const ResultRow& r) {
  if (r.experiment == "example2" || r.experiment == "example4") {
    return "Nh=" + std::to_string(r.n_fine) + " p=" + std::to_string(r.p);
  }
  if (r.experiment.rfind("example5", 0) == 0 || r.experiment == "unprec_p") return r.fine_id;
  return "p=" + std::to_string(r.p);
}

std::string render_svg(const std::string& title, const Chart& chart) {
  constexpr double width = 640;
  constexpr double height = 440;
  constexpr double left = 70;
  constexpr double right = 180;
  constexpr double top = 40;
  constexpr double bottom = 50;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : chart.series) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  }
  xmin = std::floor(xmin * 10) / 10;
  xmax = std::ceil(xmax * 10) / 10;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double x) { return left + (std::log10(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (std::log10(y) - ymin) / (ymax - ymin) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << y << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  // x ticks at the data abscissae of the first series
  std::vector<double> xt;
  for (const auto& s : chart.series)
    for (auto [x, y] : s.points) xt.push_back(x);
  std::sort(xt.begin(), xt.end());
  xt.erase(std::unique(xt.begin(), xt.end()), xt.end());
  for (double x : xt) {
    out << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << num(x)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">" << chart.x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
      << ")\" text-anchor=\"middle\">K</text>\n";
  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    const char* c = colors[i % 8];
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (auto [x, y] : s.points) {
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    const double ly = top + 14 + 16 * static_cast<double>(i);
    out << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 32 << "\" y1=\"" << ly - 4 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::vector<std::filesystem::path> write_plots(const ResultsTable& table, const std::filesystem::path& dir) {
  std::map<std::string, Chart> charts;
  std::map<std::string, std::map<std::string, std::size_t>> index;
  for (const auto& r : table.rows) {
    if (!(r.K > 0.0)) continue;
    auto& chart = charts[r.experiment];
    const double x = x_of(r, chart.x_label);
    const std::string s = series_of(r);
    auto [it, fresh] = index[r.experiment].emplace(s, chart.series.size());
    if (fresh) chart.series.push_back({s, {}});
    chart.series[it->second].points.emplace_back(x, r.K);
  }
  std::vector<std::filesystem::path> written;
  for (auto& [name, chart] : charts) {
    for (auto& s : chart.series) std::sort(s.points.begin(), s.points.end());
    const auto path = dir / ("plot_" + name + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << render_svg(name, chart);
    written.push_back(path);
  }
  return written;
}

}  // namespace dgschwarz

#include "dgschwarz/harness.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dgschwarz {

namespace pt = boost::property_tree;

std::string to_string(RhoLayout layout) {
  switch (layout) {
    case RhoLayout::uniform:
      return "uniform";
    case RhoLayout::coarse_checkerboard:
      return "coarse_checkerboard";
    case RhoLayout::fine_checkerboard:
      return "fine_checkerboard";
  }
  return "uniform";
}

RhoLayout parse_layout(const std::string& name) {
  if (name == "uniform") return RhoLayout::uniform;
  if (name == "coarse_checkerboard") return RhoLayout::coarse_checkerboard;
  if (name == "fine_checkerboard") return RhoLayout::fine_checkerboard;
  throw ConfigError("unknown rho layout '" + name + "'");
}

std::string MeshPairSpec::label() const {
  return family + std::to_string(n_fine) + "_" + std::to_string(n_coarse) + (nested ? "_nested" : "_nonnested");
}

namespace {

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("bad value '" + text + "' for " + key);
  return value;
}

template <class T>
std::string format_number(T value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  for (const auto& w : split(text)) out.push_back(parse_number<T>(w, key));
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    if constexpr (std::is_same_v<T, std::string>) {
      out += values[i];
    } else {
      out += format_number(values[i]);
    }
  }
  return out;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("bad boolean '" + text + "' for " + key);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"experiment", {"id", "seed", "output"}},
      {"mesh", {"family", "fine_sizes", "coarse_sizes", "min_ratio", "lloyd_iters", "pairs", "sweep_size"}},
      {"discretization", {"degrees", "coarse_degree", "c_sigma"}},
      {"coefficient", {"layouts", "rho_e"}},
      {"solver", {"tol", "estimate_tol", "maxit"}},
      {"output", {"plots"}},
  };
  return s;
}

bool is_square(int n) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return r * r == n;
}

}  // namespace

MeshPairSpec parse_pair(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) throw ConfigError("mesh pair '" + text + "' must read family:Nh:NH:nested|nonnested");
  MeshPairSpec p;
  p.family = parts[0];
  if (p.family != "quad" && p.family != "voronoi") throw ConfigError("mesh pair family must be quad or voronoi");
  p.n_fine = parse_number<int>(parts[1], "pairs");
  p.n_coarse = parse_number<int>(parts[2], "pairs");
  if (parts[3] == "nested") {
    p.nested = true;
  } else if (parts[3] == "nonnested") {
    p.nested = false;
  } else {
    throw ConfigError("mesh pair mode must be nested or nonnested");
  }
  return p;
}

std::string to_string(const MeshPairSpec& pair) {
  return pair.family + ":" + std::to_string(pair.n_fine) + ":" + std::to_string(pair.n_coarse) + ":" +
         (pair.nested ? "nested" : "nonnested");
}

void validate(const ExperimentConfig& cfg) {
  static const std::set<std::string> ids{"1", "2", "4", "5", "unprec"};
  if (!ids.count(cfg.experiment)) throw ConfigError("experiment must be one of 1, 2, 4, 5, unprec");
  if (cfg.output.empty()) throw ConfigError("output file name is empty");
  if (cfg.degrees.empty()) throw ConfigError("no polynomial degrees given");
  for (int p : cfg.degrees) {
    if (p < 1 || p > 10) throw ConfigError("degree p must lie in 1..10");
    if (cfg.coarse_degree > p) throw ConfigError("coarse degree q must not exceed p");
  }
  if (cfg.coarse_degree < 0) throw ConfigError("coarse degree must be >= 0 (0 means q = p)");
  if (!(cfg.c_sigma > 0.0)) throw ConfigError("c_sigma must be positive");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
  if (cfg.estimate_tol >= 1.0) throw ConfigError("estimate_tol must be < 1");
  if (cfg.maxit < 0) throw ConfigError("maxit must be >= 0");
  if (cfg.lloyd_iters < 0) throw ConfigError("lloyd_iters must be >= 0");
  if (cfg.rho_values.empty()) throw ConfigError("no rho values given");
  for (double r : cfg.rho_values) {
    if (!(std::isfinite(r) && r >= 1.0)) throw ConfigError("rho values must be finite and >= 1");
  }
  if (cfg.layouts.empty()) throw ConfigError("no rho layouts given");
  for (int n : cfg.fine_sizes)
    if (n < 1) throw ConfigError("mesh sizes must be positive");
  for (int n : cfg.coarse_sizes)
    if (n < 1) throw ConfigError("mesh sizes must be positive");

  if (cfg.experiment == "1") {
    if (cfg.family != "lshape_refined" && cfg.family != "lshape_agglomerated") {
      throw ConfigError("experiment 1 family must be lshape_refined or lshape_agglomerated");
    }
    if (cfg.fine_sizes.size() != 1) throw ConfigError("experiment 1 takes exactly one fine size");
    if (cfg.family == "lshape_refined" && cfg.fine_sizes[0] < 2) {
      throw ConfigError("lshape_refined needs at least 2 fine cells per coarse cell");
    }
    if (cfg.family == "lshape_agglomerated" && cfg.fine_sizes[0] < 32) {
      throw ConfigError("lshape_agglomerated needs at least 32 fine cells");
    }
  } else if (cfg.experiment == "2" || cfg.experiment == "4") {
    if (cfg.family != "voronoi" && cfg.family != "quad") throw ConfigError("family must be voronoi or quad");
    if (cfg.fine_sizes.empty() || cfg.coarse_sizes.empty()) throw ConfigError("fine_sizes and coarse_sizes required");
    if (cfg.min_ratio < 1) throw ConfigError("min_ratio must be >= 1");
  } else if (cfg.experiment == "5") {
    if (cfg.pairs.empty()) throw ConfigError("experiment 5 needs at least one mesh pair");
    for (const auto& pr : cfg.pairs) {
      if (pr.n_coarse < 1 || pr.n_fine <= pr.n_coarse) throw ConfigError("mesh pair needs N_h > N_H >= 1");
    }
  } else {
    if (cfg.family != "voronoi" && cfg.family != "quad") throw ConfigError("family must be voronoi or quad");
    if (cfg.fine_sizes.size() < 2) throw ConfigError("unprec needs at least two fine sizes");
    if (cfg.sweep_size < 1) throw ConfigError("sweep_size must be positive");
  }
  const bool quad = cfg.family == "quad";
  if (quad) {
    for (int n : cfg.fine_sizes)
      if (!is_square(n)) throw ConfigError("quad mesh sizes must be perfect squares");
    if (cfg.experiment == "unprec" && !is_square(cfg.sweep_size)) throw ConfigError("sweep_size must be a square");
  }
  for (const auto& pr : cfg.pairs) {
    if (pr.family == "quad" && !is_square(pr.n_fine)) throw ConfigError("quad pair sizes must be perfect squares");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown config section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("top-level key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };

  ExperimentConfig cfg;
  if (auto v = get("experiment.id")) cfg.experiment = *v;
  if (auto v = get("experiment.seed")) cfg.seed = parse_number<std::uint64_t>(*v, "seed");
  if (auto v = get("experiment.output")) cfg.output = *v;
  if (auto v = get("mesh.family")) cfg.family = *v;
  if (auto v = get("mesh.fine_sizes")) cfg.fine_sizes = parse_list<int>(*v, "fine_sizes");
  if (auto v = get("mesh.coarse_sizes")) cfg.coarse_sizes = parse_list<int>(*v, "coarse_sizes");
  if (auto v = get("mesh.min_ratio")) cfg.min_ratio = parse_number<int>(*v, "min_ratio");
  if (auto v = get("mesh.lloyd_iters")) cfg.lloyd_iters = parse_number<int>(*v, "lloyd_iters");
  if (auto v = get("mesh.pairs")) {
    cfg.pairs.clear();
    for (const auto& w : split(*v)) cfg.pairs.push_back(parse_pair(w));
  }
  if (auto v = get("mesh.sweep_size")) cfg.sweep_size = parse_number<int>(*v, "sweep_size");
  if (auto v = get("discretization.degrees")) cfg.degrees = parse_list<int>(*v, "degrees");
  if (auto v = get("discretization.coarse_degree")) cfg.coarse_degree = parse_number<int>(*v, "coarse_degree");
  if (auto v = get("discretization.c_sigma")) cfg.c_sigma = parse_number<double>(*v, "c_sigma");
  if (auto v = get("coefficient.layouts")) {
    cfg.layouts.clear();
    for (const auto& w : split(*v)) cfg.layouts.push_back(parse_layout(w));
  }
  if (auto v = get("coefficient.rho_e")) cfg.rho_values = parse_list<double>(*v, "rho_e");
  if (auto v = get("solver.tol")) cfg.tol = parse_number<double>(*v, "tol");
  if (auto v = get("solver.estimate_tol")) cfg.estimate_tol = parse_number<double>(*v, "estimate_tol");
  if (auto v = get("solver.maxit")) cfg.maxit = parse_number<int>(*v, "maxit");
  if (auto v = get("output.plots")) cfg.plots = parse_bool(*v, "plots");
  validate(cfg);
  return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::vector<std::string> pairs;
  for (const auto& p : cfg.pairs) pairs.push_back(to_string(p));
  std::vector<std::string> layouts;
  for (auto l : cfg.layouts) layouts.push_back(to_string(l));
  std::ostringstream out;
  out << "[experiment]\n"
      << "id = " << cfg.experiment << "\n"
      << "seed = " << cfg.seed << "\n"
      << "output = " << cfg.output << "\n\n"
      << "[mesh]\n"
      << "family = " << cfg.family << "\n"
      << "fine_sizes = " << join(cfg.fine_sizes) << "\n"
      << "coarse_sizes = " << join(cfg.coarse_sizes) << "\n"
      << "min_ratio = " << cfg.min_ratio << "\n"
      << "lloyd_iters = " << cfg.lloyd_iters << "\n"
      << "pairs = " << join(pairs) << "\n"
      << "sweep_size = " << cfg.sweep_size << "\n\n"
      << "[discretization]\n"
      << "degrees = " << join(cfg.degrees) << "\n"
      << "coarse_degree = " << cfg.coarse_degree << "\n"
      << "c_sigma = " << format_number(cfg.c_sigma) << "\n\n"
      << "[coefficient]\n"
      << "layouts = " << join(layouts) << "\n"
      << "rho_e = " << join(cfg.rho_values) << "\n\n"
      << "[solver]\n"
      << "tol = " << format_number(cfg.tol) << "\n"
      << "estimate_tol = " << format_number(cfg.estimate_tol) << "\n"
      << "maxit = " << cfg.maxit << "\n\n"
      << "[output]\n"
      << "plots = " << (cfg.plots ? "true" : "false") << "\n";
  return out.str();
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path.string());
  out << format_config(cfg);
}

}  // namespace dgschwarz

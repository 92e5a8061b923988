#include "nhb/config.hpp"

#include "nhb/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace nhb {

namespace {

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
T parse_value(const std::string& text, const std::string& where) {
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else {
    T v{};
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw ConfigError(fmt::format("{}: cannot parse '{}'", where, text));
    }
    return v;
  }
}

template <class T, class Access>
Field field(std::string section, std::string key, Access access) {
  const std::string where = section + "." + key;
  return Field{std::move(section), std::move(key),
               [access](const RunConfig& c) { return fmt::format("{}", access(c)); },
               [access, where](RunConfig& c, const std::string& v) {
                 access(c) = parse_value<T>(v, where);
               }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field<double>("model", "E_C", [](auto& c) -> auto& { return c.model.E_C; }),
      field<double>("model", "E_X", [](auto& c) -> auto& { return c.model.E_X; }),
      field<double>("model", "omega_R", [](auto& c) -> auto& { return c.model.omega_R; }),
      field<double>("model", "gamma_C", [](auto& c) -> auto& { return c.model.gamma_C; }),
      field<double>("model", "p", [](auto& c) -> auto& { return c.model.p; }),
      field<double>("model", "g1", [](auto& c) -> auto& { return c.model.g1; }),
      field<double>("model", "g2", [](auto& c) -> auto& { return c.model.g2; }),
      field<std::uint64_t>("run", "seed", [](auto& c) -> auto& { return c.seed; }),
      field<double>("spectrum", "x_min", [](auto& c) -> auto& { return c.spectrum.x_min; }),
      field<double>("spectrum", "x_max", [](auto& c) -> auto& { return c.spectrum.x_max; }),
      field<std::size_t>("spectrum", "points", [](auto& c) -> auto& { return c.spectrum.points; }),
      field<double>("sweep", "gamma_min", [](auto& c) -> auto& { return c.sweep.grid.gamma.lo; }),
      field<double>("sweep", "gamma_max", [](auto& c) -> auto& { return c.sweep.grid.gamma.hi; }),
      field<std::size_t>("sweep", "gamma_points",
                         [](auto& c) -> auto& { return c.sweep.grid.gamma.points; }),
      field<double>("sweep", "p_min", [](auto& c) -> auto& { return c.sweep.grid.p.lo; }),
      field<double>("sweep", "p_max", [](auto& c) -> auto& { return c.sweep.grid.p.hi; }),
      field<std::size_t>("sweep", "p_points", [](auto& c) -> auto& { return c.sweep.grid.p.points; }),
      field<double>("sweep", "jump_tol", [](auto& c) -> auto& { return c.sweep.jump_tol; }),
      field<double>("cut", "gamma", [](auto& c) -> auto& { return c.cut.gamma; }),
      field<double>("cut", "p_min", [](auto& c) -> auto& { return c.cut.p_min; }),
      field<double>("cut", "p_max", [](auto& c) -> auto& { return c.cut.p_max; }),
      field<std::size_t>("cut", "samples", [](auto& c) -> auto& { return c.cut.samples; }),
      field<std::string>("evolve", "start", [](auto& c) -> auto& { return c.evolve.start; }),
      field<double>("evolve", "psi_C_re", [](auto& c) -> auto& { return c.evolve.psi_C_re; }),
      field<double>("evolve", "psi_C_im", [](auto& c) -> auto& { return c.evolve.psi_C_im; }),
      field<double>("evolve", "psi_X_re", [](auto& c) -> auto& { return c.evolve.psi_X_re; }),
      field<double>("evolve", "psi_X_im", [](auto& c) -> auto& { return c.evolve.psi_X_im; }),
      field<double>("evolve", "mix", [](auto& c) -> auto& { return c.evolve.mix; }),
      field<double>("evolve", "dt", [](auto& c) -> auto& { return c.evolve.dt; }),
      field<double>("evolve", "t_end", [](auto& c) -> auto& { return c.evolve.t_end; }),
      field<std::size_t>("evolve", "stride", [](auto& c) -> auto& { return c.evolve.stride; }),
      field<double>("evolve", "transient_fraction",
                    [](auto& c) -> auto& { return c.evolve.transient_fraction; }),
      field<double>("locate", "et_gamma_min", [](auto& c) -> auto& { return c.locate.et_gamma_min; }),
      field<double>("locate", "et_gamma_max", [](auto& c) -> auto& { return c.locate.et_gamma_max; }),
      field<double>("locate", "p_min", [](auto& c) -> auto& { return c.locate.p_min; }),
      field<double>("locate", "p_max", [](auto& c) -> auto& { return c.locate.p_max; }),
      field<double>("locate", "tol", [](auto& c) -> auto& { return c.locate.tol; }),
  };
  return table;
}

const Field& lookup(std::string_view section, std::string_view key) {
  for (const Field& f : fields()) {
    if (f.section == section && f.key == key) {
      return f;
    }
  }
  throw ConfigError(fmt::format("unknown configuration key '{}.{}'", section, key));
}

void apply_tree(RunConfig& cfg, const boost::property_tree::ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError(fmt::format("key '{}' outside of a section", section));
    }
    for (const auto& [key, value] : body) {
      lookup(section, key).set(cfg, value.data());
    }
  }
}

} // namespace

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("config syntax error: {}", e.message()));
  }
  RunConfig cfg;
  apply_tree(cfg, tree);
  return cfg;
}

RunConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot open config file '{}'", path));
  }
  return parse_config(in);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError(fmt::format("override '{}' is not of the form section.key=value", assignment));
  }
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
  };
  lookup(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)))
      .set(cfg, trim(assignment.substr(eq + 1)));
}

void validate(const RunConfig& cfg) {
  try {
    validate(cfg.model);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  auto require = [](bool ok, std::string_view what) {
    if (!ok) throw ConfigError(std::string(what));
  };
  auto finite = [](std::initializer_list<double> vs) {
    for (double v : vs) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  };
  const auto& s = cfg.spectrum;
  require(finite({s.x_min, s.x_max}) && s.x_min >= 0.0 && s.x_max >= s.x_min,
          "spectrum: need 0 <= x_min <= x_max");
  require(s.points >= 1, "spectrum: points must be >= 1");
  const auto& g = cfg.sweep.grid;
  require(finite({g.gamma.lo, g.gamma.hi, g.p.lo, g.p.hi}) && g.gamma.lo >= 0.0 &&
              g.gamma.hi > g.gamma.lo && g.p.lo >= 0.0 && g.p.hi > g.p.lo,
          "sweep: need 0 <= gamma_min < gamma_max and 0 <= p_min < p_max");
  require(g.gamma.points >= 2 && g.p.points >= 2, "sweep: need at least 2 points per axis");
  require(cfg.sweep.jump_tol > 0.0, "sweep: jump_tol must be positive");
  const auto& c = cfg.cut;
  require(finite({c.gamma, c.p_min, c.p_max}) && c.gamma > 0.0 && c.p_min >= 0.0 &&
              c.p_max > c.p_min,
          "cut: need gamma > 0 and 0 <= p_min < p_max");
  require(c.samples >= 2, "cut: samples must be >= 2");
  const auto& e = cfg.evolve;
  static const std::set<std::string> starts = {"random", "explicit", "pair", "top"};
  require(starts.count(e.start) == 1, "evolve: start must be random, explicit, pair or top");
  require(finite({e.psi_C_re, e.psi_C_im, e.psi_X_re, e.psi_X_im, e.mix}), "evolve: non-finite amplitude");
  require(e.dt > 0.0 && e.dt <= 0.02 / std::max(cfg.model.omega_R, 1e-300),
          "evolve: need 0 < dt <= 0.02 / omega_R");
  require(e.t_end > 0.0 && std::isfinite(e.t_end), "evolve: t_end must be positive");
  require(e.stride >= 1, "evolve: stride must be >= 1");
  require(e.transient_fraction >= 0.0 && e.transient_fraction < 1.0,
          "evolve: transient_fraction must lie in [0, 1)");
  const auto& l = cfg.locate;
  require(finite({l.et_gamma_min, l.et_gamma_max, l.p_min, l.p_max, l.tol}) &&
              l.et_gamma_min > 0.0 && l.et_gamma_max > l.et_gamma_min && l.p_max > l.p_min &&
              l.tol > 0.0,
          "locate: need 0 < et_gamma_min < et_gamma_max, p_min < p_max and tol > 0");
}

std::string emit_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += fmt::format("[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", f.key, f.get(cfg));
  }
  return out;
}

std::string config_header(const RunConfig& cfg) {
  std::string out;
  std::istringstream in(emit_config(cfg));
  for (std::string line; std::getline(in, line);) {
    out += line.empty() ? "#\n" : "# " + line + "\n";
  }
  return out;
}

RunConfig parse_header(std::istream& in) {
  std::string ini;
  for (std::string line; in.peek() == '#' && std::getline(in, line);) {
    std::string_view body(line);
    body.remove_prefix(1);
    if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    if (body.empty() || body.front() == '[' || body.find('=') != std::string_view::npos) {
      ini.append(body);
      ini += '\n';
    }
  }
  return parse_config_text(ini);
}

} // namespace nhb

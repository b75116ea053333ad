#pragma once

/**
 * \file cli.hpp
 * \brief The `charged_drop` command-line tool.
 *
 * Subcommands: `two solve|sweep|boundary`, `charges optimize|converge`,
 * `regime map` and `nondim`.  Parameters come from flags and, optionally, a
 * TOML file given with --config; flags win over the file.  Single records go
 * to standard output, tables (and SVG plots) to files in the output
 * directory, diagnostics to standard error.
 *
 * Exit status: 0 success, 1 domain/numerical error, 2 usage error.
 */

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <toml.hpp>

#include "charged_drop/charges.hpp"
#include "charged_drop/error.hpp"
#include "charged_drop/io.hpp"
#include "charged_drop/regime.hpp"
#include "charged_drop/svg.hpp"
#include "charged_drop/two_charge.hpp"
#include "charged_drop/unduloid.hpp"

namespace charged_drop::cli {

// ---------------------------------------------------------------------------
// Nondimensionalization

struct PhysicalParams {
  double r0{};       ///< solvation radius
  double r_sigma{};  ///< capillary length sqrt(kT / sigma)
  double rB{};       ///< Bjerrum length
};

struct Dimensionless {
  double rho{};
  double lambda{};
  double gamma{};
};

inline Dimensionless nondimensionalize(const PhysicalParams& p) {
  if (!(p.r0 > 0 && p.r_sigma > 0 && p.rB > 0))
    throw DomainError("nondimensionalize: lengths must be positive");
  Dimensionless d;
  d.rho = p.r0 / p.r_sigma;
  d.lambda = p.rB / p.r_sigma;
  d.gamma = d.lambda / (d.rho * d.rho * d.rho);
  return d;
}

// ---------------------------------------------------------------------------

/// Bad flags, bad config file, missing parameters.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Evaluate f(0..count-1) on up to `threads` workers; results keep index
/// order, and the first failure (by index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned threads,
                            const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, unsigned(count)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        slots[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

/// Values from the config file, looked up as section.key.
class ConfigFile {
 public:
  ConfigFile() = default;
  explicit ConfigFile(const std::string& path) {
    try {
      table_ = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
      std::ostringstream msg;
      msg << "config " << path << ": " << e.description() << " at "
          << e.source().begin;
      throw UsageError(msg.str());
    }
  }

  std::optional<double> real(const char* section, const char* key) const {
    auto node = table_[section][key];
    if (!node) return std::nullopt;
    if (auto v = node.value<double>()) return v;
    throw UsageError(fmt::format("config: {}.{} must be a number", section, key));
  }

  std::optional<std::int64_t> integer(const char* section,
                                      const char* key) const {
    auto node = table_[section][key];
    if (!node) return std::nullopt;
    if (node.is_integer()) return node.value<std::int64_t>();
    throw UsageError(fmt::format("config: {}.{} must be an integer", section, key));
  }

  std::optional<std::string> text(const char* section, const char* key) const {
    auto node = table_[section][key];
    if (!node) return std::nullopt;
    if (auto v = node.value<std::string>()) return v;
    throw UsageError(fmt::format("config: {}.{} must be a string", section, key));
  }

  std::optional<std::vector<double>> reals(const char* section,
                                           const char* key) const {
    auto node = table_[section][key];
    if (!node) return std::nullopt;
    const toml::array* arr = node.as_array();
    if (!arr) throw UsageError(fmt::format("config: {}.{} must be an array", section, key));
    std::vector<double> out;
    for (const auto& el : *arr) {
      auto v = el.value<double>();
      if (!v) throw UsageError(fmt::format("config: {}.{} must hold numbers", section, key));
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<std::int64_t>> integers(const char* section,
                                                    const char* key) const {
    auto node = table_[section][key];
    if (!node) return std::nullopt;
    const toml::array* arr = node.as_array();
    if (!arr) throw UsageError(fmt::format("config: {}.{} must be an array", section, key));
    std::vector<std::int64_t> out;
    for (const auto& el : *arr) {
      if (!el.is_integer())
        throw UsageError(fmt::format("config: {}.{} must hold integers", section, key));
      out.push_back(*el.value<std::int64_t>());
    }
    return out;
  }

 private:
  toml::table table_;
};

/// Flag value if the flag was given, else the file value, else `fallback`.
template <class T>
std::optional<T> merge(const CLI::Option* flag, const T& flag_value,
                       const std::optional<T>& file_value,
                       const std::type_identity_t<std::optional<T>>& fallback =
                           std::nullopt) {
  if (flag && flag->count() > 0) return flag_value;
  if (file_value) return file_value;
  return fallback;
}

template <class T>
T require(const std::optional<T>& v, const std::string& name) {
  if (!v) throw UsageError("missing parameter " + name);
  return *v;
}

inline std::vector<std::size_t> to_counts(const std::vector<std::int64_t>& v,
                                          const std::string& name) {
  std::vector<std::size_t> out;
  for (auto x : v) {
    if (x < 1) throw DomainError(name + ": counts must be >= 1");
    out.push_back(std::size_t(x));
  }
  return out;
}

inline void warn_window(std::ostream& err,
                        const two_charge::TwoChargeSolution& s) {
  if (!s.asymptotic.in_window)
    err << fmt::format(
        "warning: eps={:.6g} gamma={:.6g} lies outside the asymptotic window; "
        "h_asym, L_asym, E_asym are indicative only\n",
        s.eps, s.gamma);
}

}  // namespace detail

/// Parse argv-style arguments (without the program name) and execute.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Charged drop solver: two-charge minimizers, many-charge "
               "configurations and existence regimes.",
               "charged_drop"};
  app.require_subcommand(1);

  std::string config_path, format = "json", plot = "none", out_dir = ".";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* o_format = app.add_option("--format", format, "csv or json")
                       ->check(CLI::IsMember({"csv", "json"}));
  auto* o_plot =
      app.add_option("--plot", plot, "none or svg")->check(CLI::IsMember({"none", "svg"}));
  auto* o_out = app.add_option("--out-dir", out_dir, "directory for tables and plots");
  app.add_option("--config", config_path, "TOML configuration file")
      ->check(CLI::ExistingFile);
  auto* o_threads =
      app.add_option("--threads", threads, "worker threads for sweeps")
          ->check(CLI::PositiveNumber);

  // two ---------------------------------------------------------------------
  auto* two = app.add_subcommand("two", "exact two-charge problem");
  two->require_subcommand(1);
  double t_eps = 0, t_gamma = 0, t_eps_max = 0.05;
  std::vector<double> t_eps_list, t_gamma_list;
  auto* solve = two->add_subcommand("solve", "minimize for one (eps, gamma)");
  auto* o_t_eps = solve->add_option("--eps", t_eps, "charge radius");
  auto* o_t_gamma = solve->add_option("--gamma", t_gamma, "coupling");
  auto* o_t_eps_max_s = solve->add_option("--eps-max", t_eps_max, "largest admissible eps");
  auto* sweep = two->add_subcommand("sweep", "minimize over an (eps, gamma) grid");
  auto* o_t_eps_list = sweep->add_option("--eps-list", t_eps_list, "eps values");
  auto* o_t_gamma_list = sweep->add_option("--gamma-list", t_gamma_list, "gamma values");
  auto* o_t_eps_max_w = sweep->add_option("--eps-max", t_eps_max, "largest admissible eps");
  auto* boundary = two->add_subcommand("boundary", "existence threshold gamma_c(eps)");
  auto* o_t_eps_list_b = boundary->add_option("--eps-list", t_eps_list, "eps values");
  auto* o_t_eps_max_b = boundary->add_option("--eps-max", t_eps_max, "largest admissible eps");

  // charges -----------------------------------------------------------------
  auto* chg = app.add_subcommand("charges", "many-charge configurations");
  chg->require_subcommand(1);
  std::int64_t c_n = 0, c_restarts = 8;
  std::uint64_t c_seed = 0;
  double c_eps = 0, c_R = 1, c_tol = 1e-9;
  std::vector<std::int64_t> c_n_list;
  auto* copt = chg->add_subcommand("optimize", "optimize one configuration");
  auto* cconv = chg->add_subcommand("converge", "uniformity diagnostics over n");
  auto* o_c_n = copt->add_option("--n", c_n, "number of charges");
  auto* o_c_n_list = cconv->add_option("--n-list", c_n_list, "numbers of charges");
  std::vector<CLI::Option*> o_c_eps, o_c_R, o_c_seed, o_c_restarts, o_c_tol;
  for (auto* sub : {copt, cconv}) {
    o_c_eps.push_back(sub->add_option("--eps", c_eps, "charge radius"));
    o_c_R.push_back(sub->add_option("--R", c_R, "host ball radius"));
    o_c_seed.push_back(sub->add_option("--seed", c_seed, "random seed"));
    o_c_restarts.push_back(sub->add_option("--restarts", c_restarts, "multi-start count"));
    o_c_tol.push_back(sub->add_option("--tol", c_tol, "projected gradient tolerance"));
  }

  // regime ------------------------------------------------------------------
  auto* reg = app.add_subcommand("regime", "existence regimes");
  reg->require_subcommand(1);
  auto* rmap = reg->add_subcommand("map", "classify an (eps, gamma, n) grid");
  std::vector<double> r_eps, r_gamma;
  std::vector<std::int64_t> r_n;
  double r_C = 0, r_g0 = 0, r_d0 = 0;
  auto* o_r_eps = rmap->add_option("--eps-list", r_eps, "eps values");
  auto* o_r_gamma = rmap->add_option("--gamma-list", r_gamma, "gamma values");
  auto* o_r_n = rmap->add_option("--n-list", r_n, "charge counts");
  auto* o_r_C = rmap->add_option("--C", r_C, "threshold constant C");
  auto* o_r_g0 = rmap->add_option("--gamma0", r_g0, "coupling floor gamma0");
  auto* o_r_d0 = rmap->add_option("--delta0", r_d0, "non-existence constant delta0");

  // nondim ------------------------------------------------------------------
  auto* nd = app.add_subcommand("nondim", "dimensionless parameters");
  PhysicalParams phys;
  nd->add_option("--r0", phys.r0, "solvation radius")->required();
  nd->add_option("--rsigma", phys.r_sigma, "capillary length")->required();
  nd->add_option("--rb", phys.rB, "Bjerrum length")->required();

  for (auto* sub : {two, chg, reg, solve, sweep, boundary, copt, cconv, rmap, nd})
    sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const auto any_count = [](const std::vector<CLI::Option*>& opts) {
    for (auto* o : opts)
      if (o->count() > 0) return o;
    return static_cast<CLI::Option*>(nullptr);
  };

  try {
    const detail::ConfigFile cfg =
        config_path.empty() ? detail::ConfigFile{} : detail::ConfigFile{config_path};

    const std::string fmt_choice =
        *detail::merge<std::string>(o_format, format, cfg.text("output", "format"),
                                    std::string("json"));
    if (fmt_choice != "csv" && fmt_choice != "json")
      throw UsageError("output.format must be csv or json");
    const std::string plot_choice =
        *detail::merge<std::string>(o_plot, plot, cfg.text("output", "plot"),
                                    std::string("none"));
    if (plot_choice != "none" && plot_choice != "svg")
      throw UsageError("output.plot must be none or svg");
    std::optional<std::string> dir_choice;
    if (o_out->count() > 0) {
      dir_choice = out_dir;
    } else if (const char* env = std::getenv("CHARGED_DROP_OUT"); env && *env) {
      dir_choice = std::string(env);
    } else {
      dir_choice = cfg.text("output", "out_dir");
    }
    const std::filesystem::path dir = dir_choice.value_or(".");
    const unsigned n_threads = o_threads->count() > 0 ? threads
                               : cfg.integer("output", "threads")
                                   ? unsigned(std::max<std::int64_t>(
                                         1, *cfg.integer("output", "threads")))
                                   : threads;
    const bool json = fmt_choice == "json";
    const bool svg_plot = plot_choice == "svg";

    const auto prepare_dir = [&] {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      const auto probe = dir / ".charged_drop_write_test";
      std::ofstream f(probe);
      if (!f) throw IoError("output directory " + dir.string() + " is not writable");
      f.close();
      std::filesystem::remove(probe, ec);
    };
    const auto table_path = [&](const std::string& stem) {
      return (dir / (stem + (json ? ".json" : ".csv"))).string();
    };
    const auto dump = [](const io::ordered_json& j) { return j.dump(2) + "\n"; };

    two_charge::Options two_opts;
    two_opts.eps_max = *detail::merge<double>(
        any_count({o_t_eps_max_s, o_t_eps_max_w, o_t_eps_max_b}), t_eps_max,
        cfg.real("two_charge", "eps_max"), 0.05);

    if (solve->parsed()) {
      const double eps = detail::require(
          detail::merge<double>(o_t_eps, t_eps, cfg.real("two_charge", "eps")), "eps");
      const double gamma = detail::require(
          detail::merge<double>(o_t_gamma, t_gamma, cfg.real("two_charge", "gamma")),
          "gamma");
      if (svg_plot) prepare_dir();
      const auto sol = two_charge::minimize(eps, gamma, two_opts);
      detail::warn_window(err, sol);
      if (json) {
        out << dump(io::to_json(sol));
      } else {
        io::write_csv(out, std::vector{sol});
      }
      if (svg_plot) {
        const auto contact = unduloid::contact_params(sol.c_star, sol.h_star, eps);
        const auto pts = unduloid::sample_profile(contact.a, sol.c_star, 401);
        svg::Series s{"meridian", {}, {}, false};
        for (const auto& p : pts) {
          s.x.push_back(p.x);
          s.y.push_back(p.z);
        }
        svg::emit_plot(svg::PlotKind::Profile, {s},
                       (dir / "two_solve_profile.svg").string());
      }
      return 0;
    }

    if (sweep->parsed()) {
      const auto eps_list = detail::require(
          detail::merge(o_t_eps_list, t_eps_list, cfg.reals("two_charge", "eps_list")),
          "eps-list");
      const auto gamma_list = detail::require(
          detail::merge(o_t_gamma_list, t_gamma_list,
                        cfg.reals("two_charge", "gamma_list")),
          "gamma-list");
      if (eps_list.empty() || gamma_list.empty())
        throw UsageError("two sweep: grids must be non-empty");
      prepare_dir();
      std::vector<std::pair<double, double>> grid;
      for (double e : eps_list)
        for (double g : gamma_list) grid.emplace_back(e, g);
      std::sort(grid.begin(), grid.end());
      const auto rows = detail::parallel_map<two_charge::TwoChargeSolution>(
          grid.size(), n_threads, [&](std::size_t i) {
            return two_charge::minimize(grid[i].first, grid[i].second, two_opts);
          });
      for (const auto& r : rows) detail::warn_window(err, r);
      std::ostringstream os;
      if (json)
        os << dump(io::to_json_array(rows));
      else
        io::write_csv(os, rows);
      io::write_file(table_path("two_sweep"), os.str());
      return 0;
    }

    if (boundary->parsed()) {
      auto eps_list = detail::require(
          detail::merge(o_t_eps_list_b, t_eps_list, cfg.reals("two_charge", "eps_list")),
          "eps-list");
      if (eps_list.empty()) throw UsageError("two boundary: eps-list is empty");
      prepare_dir();
      const auto rows = detail::parallel_map<regime::BoundaryPoint>(
          eps_list.size(), n_threads, [&](std::size_t i) {
            return regime::two_charge_boundary_curve({eps_list[i]}, two_opts).front();
          });
      std::ostringstream os;
      if (json)
        os << dump(io::to_json_array(rows));
      else
        io::write_csv(os, rows);
      io::write_file(table_path("two_boundary"), os.str());
      if (svg_plot) {
        svg::Series s{"gamma_c * eps", {}, {}, true};
        for (const auto& p : rows) {
          s.x.push_back(p.eps);
          s.y.push_back(p.product);
        }
        svg::emit_plot(svg::PlotKind::BoundaryCurve, {s},
                       (dir / "two_boundary.svg").string());
      }
      return 0;
    }

    if (copt->parsed() || cconv->parsed()) {
      const double eps = detail::require(
          detail::merge(any_count(o_c_eps), c_eps, cfg.real("charges", "eps")), "eps");
      const double R =
          *detail::merge(any_count(o_c_R), c_R, cfg.real("charges", "R"), 1.0);
      const auto seed_file = cfg.integer("charges", "seed");
      const std::uint64_t seed =
          any_count(o_c_seed) ? c_seed
          : seed_file         ? std::uint64_t(*seed_file)
                              : 0;
      charges::OptimizeOptions opts;
      opts.restarts = int(*detail::merge<std::int64_t>(
          any_count(o_c_restarts), c_restarts, cfg.integer("charges", "restarts"),
          std::int64_t(8)));
      opts.tol = *detail::merge(any_count(o_c_tol), c_tol, cfg.real("charges", "tol"),
                                1e-9);

      if (copt->parsed()) {
        const auto n = detail::require(
            detail::merge<std::int64_t>(o_c_n, c_n, cfg.integer("charges", "n")), "n");
        if (n < 1) throw DomainError("charges optimize: need n >= 1");
        charges::DescentReport rep;
        const auto config = charges::optimize(std::size_t(n), eps, R, seed, opts, &rep);
        err << fmt::format(
            "energy sum 1/r = {:.17g}, projected gradient = {:.3g}, "
            "iterations = {}\n",
            rep.energy, rep.projected_gradient, rep.iterations);
        if (!rep.converged)
          err << "warning: projected gradient above tolerance\n";
        for (const auto& v : charges::validate(config))
          err << "warning: " << v.describe() << "\n";
        if (json)
          out << dump(io::to_json(config));
        else
          io::write_centers_csv(out, config);
        return 0;
      }

      const auto n_list = detail::to_counts(
          detail::require(detail::merge(o_c_n_list, c_n_list,
                                        cfg.integers("charges", "n_list")),
                          "n-list"),
          "n-list");
      if (n_list.empty()) throw UsageError("charges converge: n-list is empty");
      prepare_dir();
      const auto rows = detail::parallel_map<io::UniformityRow>(
          n_list.size(), n_threads, [&](std::size_t i) {
            charges::DescentReport rep;
            const auto config = charges::optimize(n_list[i], eps, R, seed, opts, &rep);
            io::UniformityRow row;
            row.n = n_list[i];
            row.eps = eps;
            row.energy = rep.energy;
            row.projected_gradient = rep.projected_gradient;
            row.stats = charges::uniformity_stats(config, 1e-9 * R);
            return row;
          });
      std::ostringstream os;
      if (json)
        os << dump(io::to_json_array(rows));
      else
        io::write_csv(os, rows);
      io::write_file(table_path("charges_converge"), os.str());
      if (svg_plot) {
        svg::Series gap{"riesz_gap", {}, {}, false}, cap{"cap_discrepancy", {}, {}, false};
        for (const auto& r : rows) {
          gap.x.push_back(double(r.n));
          gap.y.push_back(r.stats.riesz_gap);
          cap.x.push_back(double(r.n));
          cap.y.push_back(r.stats.cap_discrepancy);
        }
        svg::emit_plot(svg::PlotKind::Uniformity, {gap, cap},
                       (dir / "charges_converge.svg").string());
      }
      return 0;
    }

    if (rmap->parsed()) {
      regime::Grid grid;
      grid.eps = detail::require(
          detail::merge(o_r_eps, r_eps, cfg.reals("regime", "eps")), "eps-list");
      grid.gamma = detail::require(
          detail::merge(o_r_gamma, r_gamma, cfg.reals("regime", "gamma")), "gamma-list");
      grid.n = detail::to_counts(
          detail::require(detail::merge(o_r_n, r_n, cfg.integers("regime", "n")),
                          "n-list"),
          "n-list");
      regime::ClassifierConstants k;
      k.C_threshold = *detail::merge(o_r_C, r_C, cfg.real("regime", "C_threshold"),
                                     k.C_threshold);
      k.gamma0 = *detail::merge(o_r_g0, r_g0, cfg.real("regime", "gamma0"), k.gamma0);
      k.delta0 = *detail::merge(o_r_d0, r_d0, cfg.real("regime", "delta0"), k.delta0);
      if (grid.eps.empty() || grid.gamma.empty() || grid.n.empty())
        throw UsageError("regime map: grids must be non-empty");
      prepare_dir();
      std::vector<std::tuple<double, double, std::size_t>> cells;
      for (double e : grid.eps)
        for (double g : grid.gamma)
          for (std::size_t n : grid.n) cells.emplace_back(e, g, n);
      std::sort(cells.begin(), cells.end());
      const auto rows = detail::parallel_map<regime::RegimeCell>(
          cells.size(), n_threads, [&](std::size_t i) {
            const auto& [e, g, n] = cells[i];
            return regime::classify(e, g, n, k, two_opts);
          });
      std::ostringstream os;
      if (json)
        os << dump(io::to_json_array(rows));
      else
        io::write_csv(os, rows);
      io::write_file(table_path("regime_map"), os.str());
      return 0;
    }

    if (nd->parsed()) {
      const auto d = nondimensionalize(phys);
      if (json) {
        io::ordered_json j;
        j["rho"] = d.rho;
        j["lambda"] = d.lambda;
        j["gamma"] = d.gamma;
        out << dump(j);
      } else {
        out << "rho,lambda,gamma\n"
            << fmt::format("{},{},{}\n", io::num(d.rho), io::num(d.lambda),
                           io::num(d.gamma));
      }
      return 0;
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace charged_drop::cli

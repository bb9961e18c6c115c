#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cs2d/csv.hpp"
#include "cs2d/errors.hpp"
#include "cs2d/oracle_registry.hpp"
#include "cs2d/presets.hpp"
#include "cs2d/runner.hpp"
#include "cs2d/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNumerical = 3;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  int workers = 1;
  std::string out_dir = "cs2d_out";
  std::vector<std::string> overrides;
};

nlohmann::json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cs2d::InvalidConfig(path, "cannot open scenario file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw cs2d::InvalidConfig(path, e.what());
  }
}

void apply_common(nlohmann::json& doc, const Common& o) {
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw cs2d::InvalidConfig(kv, "override must be key=value");
    cs2d::apply_override(doc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (o.replicas) doc["replicas"] = *o.replicas;
}

int run_document(nlohmann::json doc, const Common& o) {
  apply_common(doc, o);
  const auto s = cs2d::scenario_from_json(doc);
  cs2d::RunOptions opt;
  opt.out_dir = o.out_dir;
  opt.workers = o.workers;
  const auto res = cs2d::run(s, opt);
  std::cout << "scenario " << s.name << "  hash " << res.manifest.config_hash
            << "\n";
  for (const auto& p : res.points) {
    std::cout << p.dir;
    for (const auto& [k, v] : p.scalars)
      std::cout << "  " << k << "=" << cs2d::format_double(v);
    std::cout << "\n";
  }
  std::cout << "wrote " << res.manifest.outputs.size() + 1 << " files under "
            << o.out_dir << "/" << s.name << "\n";
  return kOk;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const cs2d::InvalidConfig& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalid;
  } catch (const cs2d::UnsupportedConfiguration& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return kInvalid;
  } catch (const cs2d::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const cs2d::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

void add_common(CLI::App* app, Common& o) {
  app->add_option("--seed", o.seed, "Base seed (replica i uses seed + i)");
  app->add_option("--replicas", o.replicas, "Replicas per sweep point");
  app->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out-dir", o.out_dir, "Output directory");
  app->add_option("--override,-o", o.overrides, "key=value (dotted keys)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cs2d: sideband cooling and collisional thermalization in a 1D lattice"};
  app.set_version_flag("--version", std::string(cs2d::version_string()));
  app.require_subcommand(1);

  Common common;
  std::string file, preset, formula;
  std::vector<std::string> oracle_args;
  bool list = false;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", file, "Scenario JSON")->required();
  add_common(run, common);

  auto* pre = app.add_subcommand("preset", "Run a built-in scenario");
  pre->add_option("name", preset, "Preset name");
  pre->add_flag("--list", list, "List presets");
  pre->add_flag("--print", "Print the preset document instead of running it");
  add_common(pre, common);

  auto* val = app.add_subcommand("validate", "Check a scenario file");
  val->add_option("scenario", file, "Scenario JSON")->required();

  auto* ora = app.add_subcommand("oracle", "Evaluate a closed-form expression");
  ora->add_option("formula", formula, "Formula name");
  ora->add_flag("--list", list, "List formulas and their arguments");
  ora->allow_extras();

  CLI11_PARSE(app, argc, argv);

  if (*run) return guarded([&] { return run_document(read_document(file), common); });

  if (*pre) {
    if (list || preset.empty()) {
      for (const auto& n : cs2d::preset_names()) std::cout << n << "\n";
      return preset.empty() && !list ? kInvalid : kOk;
    }
    return guarded([&] {
      auto doc = cs2d::preset_document(preset);
      if (pre->count("--print")) {
        apply_common(doc, common);
        std::cout << cs2d::to_json(cs2d::scenario_from_json(doc)).dump(2) << "\n";
        return kOk;
      }
      return run_document(doc, common);
    });
  }

  if (*val) {
    return guarded([&] {
      const auto s = cs2d::scenario_from_json(read_document(file));
      std::cout << "ok " << s.name << "  hash "
                << cs2d::config_hash(cs2d::to_json(s)) << "\n";
      return kOk;
    });
  }

  if (*ora) {
    if (list || formula.empty()) {
      for (const auto& o : cs2d::oracles()) {
        std::cout << o.name << "  " << o.description << "\n";
        for (const auto& a : o.args)
          std::cout << "    " << a.name << " = " << cs2d::format_double(a.default_value)
                    << " [" << a.unit << "]\n";
      }
      return formula.empty() && !list ? kInvalid : kOk;
    }
    return guarded([&] {
      for (const auto& [k, v] : cs2d::evaluate_oracle(formula, ora->remaining()))
        std::cout << k << " = " << cs2d::format_double(v) << "\n";
      return kOk;
    });
  }
  return kOk;
}

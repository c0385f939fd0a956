#include "curvemetrics_app/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "common.hpp"
#include "curvemetrics/csv_io.hpp"
#include "curvemetrics/error.hpp"
#include "curvemetrics/json_io.hpp"
#include "curvemetrics/study.hpp"
#include "curvemetrics_app/service.hpp"
#include "curvemetrics_app/store.hpp"

namespace curvemetrics::app {
namespace {

namespace fs = std::filesystem;

class UnwritableError : public Error {
 public:
  using Error::Error;
};

// Measure given either as a JSON file, inline JSON or individual flags.
struct SpecArgs {
  std::string file;
  std::string json;
  std::string localization = "range";
  std::string characteristic = "function";
  std::string loss = "absolute";
  std::string axis;
  std::string aggregation;
  std::string scope = "full";
  std::vector<double> band{0.05, 0.95};
  std::vector<double> interval;
  std::optional<double> epsilon;
  std::optional<double> q;
  std::optional<double> x_star;
  bool normalize_precision = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--spec", file, "Measure spec JSON file");
    cmd.add_option("--spec-json", json, "Measure spec as inline JSON");
    cmd.add_option("--localization", localization, "range or point");
    cmd.add_option("--characteristic", characteristic, "function, first_derivative or second_derivative");
    cmd.add_option("--loss", loss, "difference, absolute, squared or eps_accuracy");
    cmd.add_option("--axis", axis, "Y or X (range measures, default Y)");
    cmd.add_option("--aggregation", aggregation, "Aggregation (range measures, default integral_dx)");
    cmd.add_option("--scope", scope, "full, quantile_band or interval");
    cmd.add_option("--band", band, "Probability band l,u for the quantile_band scope")->delimiter(',')->expected(2);
    cmd.add_option("--interval", interval, "lo,hi for the interval scope")->delimiter(',')->expected(2);
    cmd.add_option("--epsilon", epsilon, "Accuracy level for eps_accuracy");
    cmd.add_option("--q", q, "Probability for quantile_Fx");
    cmd.add_option("--x-star", x_star, "Location of a point measure");
    cmd.add_flag("--normalize-precision", normalize_precision, "Divide precision-weighted values by the integral of p");
  }

  [[nodiscard]] auto build() const -> MeasureSpec {
    if (!file.empty()) return spec_from_json(read_json_file(file));
    if (!json.empty()) return spec_from_json(parse_json(json, "spec-json"));
    Json j{{"localization", localization}, {"characteristic", characteristic}, {"loss", loss}};
    if (localization == "range") {
      j["axis"] = axis.empty() ? "Y" : axis;
      j["aggregation"] = aggregation.empty() ? "integral_dx" : aggregation;
      Json s{{"kind", scope}};
      if (scope == "quantile_band") {
        s["l"] = band.at(0);
        s["u"] = band.at(1);
      } else if (scope == "interval") {
        if (interval.size() != 2) throw ValidationError("--interval lo,hi is required", "scope.interval");
        s["lo"] = interval[0];
        s["hi"] = interval[1];
      }
      j["scope"] = s;
    } else {
      if (!axis.empty()) j["axis"] = axis;
      if (!aggregation.empty()) j["aggregation"] = aggregation;
    }
    if (epsilon) j["epsilon"] = *epsilon;
    if (q) j["q"] = *q;
    if (x_star) j["x_star"] = *x_star;
    if (normalize_precision) j["normalize_precision"] = true;
    return spec_from_json(j);
  }

  static auto parse_json(const std::string& text, const std::string& field) -> Json {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ValidationError(std::string("invalid JSON: ") + e.what(), field);
    }
  }
};

auto with_beta(Scenario s, const std::vector<double>& beta) -> Scenario {
  if (beta.empty()) return s;
  return s.with_distribution(PredictorDistribution::beta(beta.at(0), beta.at(1), s.domain()));
}

// Writes `text` to `path`, or to `out` for "-".
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UnwritableError("cannot open output file " + path);
  f << text;
  f.flush();
  if (!f) throw UnwritableError("cannot write output file " + path);
}

auto describe(const ValidationError& e) -> std::string {
  std::string msg = e.what();
  if (!e.field().empty() && msg.find(e.field()) == std::string::npos)
    msg += " (field: " + e.field() + ")";
  return msg;
}

}  // namespace

auto run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int {
  CLI::App app{"Performance measures for estimated functional forms", "curvemetrics"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::optional<std::string> scenario_dir;
  std::size_t grid_cells = EvaluationOptions{}.grid_cells;
  app.add_option("--scenario-dir", scenario_dir, "Scenario directory (overrides CURVEMETRICS_SCENARIO_DIR)");
  app.add_option("--grid-cells", grid_cells, "Cells of the evaluation grid")->check(CLI::Range(8, 10000000));

  std::function<void()> action;
  auto store = [&] {
    return ScenarioStore::open(scenario_dir ? std::optional<fs::path>(*scenario_dir) : std::nullopt);
  };
  auto options = [&] {
    EvaluationOptions o;
    o.grid_cells = grid_cells;
    return o;
  };

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate one measure for one estimate");
  std::string scenario;
  std::string estimate;
  std::vector<double> beta;
  bool as_json = false;
  SpecArgs spec_args;
  evaluate_cmd->add_option("--scenario", scenario, "Scenario name or JSON file")->required();
  evaluate_cmd->add_option("--estimate", estimate, "Estimate name")->required();
  evaluate_cmd->add_option("--beta", beta, "Override the distribution by Beta(a,b)")->delimiter(',')->expected(2);
  evaluate_cmd->add_flag("--json", as_json, "Print a JSON object instead of the bare value");
  spec_args.attach(*evaluate_cmd);
  evaluate_cmd->callback([&] {
    action = [&] {
      const Scenario s = with_beta(store().resolve(scenario), beta);
      const MeasureSpec spec = spec_args.build();
      const EvalValue v = detail::evaluate_estimate(s, estimate, spec, options());
      if (as_json) {
        Json j = eval_to_json(v);
        j["label"] = label(spec);
        out << j.dump() << '\n';
      } else {
        out << v.to_string() << '\n';
      }
    };
  });

  // panel
  auto* panel_cmd = app.add_subcommand("panel", "Rank every estimate of a scenario under a list of measures");
  std::string measures_file;
  std::string preset;
  std::string output = "-";
  std::string format = "csv";
  std::size_t threads = 0;
  panel_cmd->add_option("--scenario", scenario, "Scenario name or JSON file")->required();
  auto* measures_opt = panel_cmd->add_option("--measures", measures_file, "JSON file with the measure list");
  panel_cmd->add_option("--preset", preset, "Built-in measure list")
      ->check(CLI::IsMember({"showcase"}))
      ->excludes(measures_opt);
  panel_cmd->add_option("--output,-o", output, "Output file, - for stdout");
  panel_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  panel_cmd->add_option("--threads", threads, "Worker threads, 0 for all cores");
  panel_cmd->add_option("--beta", beta, "Override the distribution by Beta(a,b)")->delimiter(',')->expected(2);
  panel_cmd->callback([&] {
    action = [&] {
      if (measures_file.empty() && preset.empty())
        throw ValidationError("one of --measures or --preset is required", "measures");
      const Scenario s = with_beta(store().resolve(scenario), beta);
      const auto specs = preset.empty() ? specs_from_json(read_json_file(measures_file)) : showcase_panel();
      detail::check_panel(s, specs);
      PanelOptions po;
      po.evaluation = options();
      po.threads = threads;
      const RankTable table = evaluate_panel(s, specs, po);
      std::ostringstream text;
      if (format == "json") {
        text << rank_table_to_json(table).dump(2) << '\n';
      } else {
        write_rank_table_csv(table, text);
      }
      emit(text.str(), output, out);
    };
  });

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit an estimate to an x,y CSV file");
  std::string data_file;
  std::string basis = "linear";
  int degree = 3;
  std::size_t n_basis = 8;
  int fp_degree = 2;
  std::vector<double> domain;
  fit_cmd->add_option("--data", data_file, "CSV file with header x,y")->required();
  fit_cmd->add_option("--basis", basis, "linear, polynomial, bspline or fp")
      ->check(CLI::IsMember({"linear", "polynomial", "bspline", "fp"}));
  fit_cmd->add_option("--degree", degree, "Polynomial or B-spline degree");
  fit_cmd->add_option("--n-basis", n_basis, "Number of B-spline basis functions");
  fit_cmd->add_option("--fp-degree", fp_degree, "Fractional polynomial degree")->check(CLI::IsMember({1, 2}));
  fit_cmd->add_option("--domain", domain, "lo,hi (default: data range)")->delimiter(',')->expected(2);
  fit_cmd->add_option("--output,-o", output, "Output file, - for stdout");
  fit_cmd->callback([&] {
    action = [&] {
      std::ifstream in(data_file);
      if (!in) throw NotFoundError("cannot read data file " + data_file);
      Dataset data = read_dataset_csv(in);
      if (!domain.empty()) data = Dataset::make(std::move(data.x), std::move(data.y), {domain[0], domain[1]});
      FittedModel model = [&] {
        if (basis == "linear") return fit_basis(data, BasisSpec::linear());
        if (basis == "polynomial") return fit_basis(data, BasisSpec::polynomial(degree));
        if (basis == "bspline")
          return fit_basis(data, BasisSpec::bspline(degree, n_basis, data.x, data.domain));
        return fit_fractional_polynomial(data, fp_degree);
      }();
      const PrecisionCurve p = precision_curve(model);
      Json j = fitted_model_to_json(model);
      j["precision"] = curve_to_json(p.curve);
      j["precision_capped"] = p.capped;
      emit(j.dump(2) + "\n", output, out);
    };
  });

  // similarity
  auto* sim_cmd = app.add_subcommand("similarity", "Compare two estimates with each other");
  std::string first;
  std::string second;
  std::string precision_file;
  SpecArgs sim_spec;
  sim_cmd->add_option("--scenario", scenario, "Scenario name or JSON file")->required();
  sim_cmd->add_option("--first", first, "First estimate")->required();
  sim_cmd->add_option("--second", second, "Second estimate")->required();
  sim_cmd->add_option("--precision", precision_file, "Curve JSON file with the precision of the difference");
  sim_cmd->add_option("--beta", beta, "Override the distribution by Beta(a,b)")->delimiter(',')->expected(2);
  sim_cmd->add_flag("--json", as_json, "Print JSON");
  sim_spec.attach(*sim_cmd);
  sim_cmd->callback([&] {
    action = [&] {
      const Scenario s = with_beta(store().resolve(scenario), beta);
      const MeasureSpec spec = sim_spec.build();
      std::optional<Curve> precision;
      if (!precision_file.empty()) precision = curve_from_json(read_json_file(precision_file));
      const auto r = similarity(spec, s.estimate(first).curve, s.estimate(second).curve, s.distribution,
                                precision ? &*precision : nullptr, options());
      if (as_json) {
        Json values = Json::array();
        for (const auto& v : r.values) values.push_back(eval_to_json(v));
        out << Json{{"label", label(spec)}, {"pair", r.is_pair()}, {"values", values}}.dump() << '\n';
      } else if (r.is_pair()) {
        out << "max " << r.values[0].to_string() << "\nmin " << r.values[1].to_string() << '\n';
      } else {
        out << r.values[0].to_string() << '\n';
      }
    };
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port, 0 for any free port")->check(CLI::Range(0, 65535));
  serve_cmd->callback([&] {
    action = [&] {
      Service service(store(), options());
      HttpServer server(service);
      const int bound = server.bind(host, port);
      out << "listening on http://" << host << ':' << bound << std::endl;
      server.listen();
    };
  });

  // scenarios
  auto* scen_cmd = app.add_subcommand("scenarios", "List or export the scenario store");
  scen_cmd->require_subcommand(1);
  auto* list_cmd = scen_cmd->add_subcommand("list", "One line per scenario");
  list_cmd->callback([&] {
    action = [&] {
      const ScenarioStore st = store();
      for (const Scenario* s : st.scenarios()) {
        out << s->name << '\t' << s->estimates.size() << " estimates\t" << s->distribution.label() << '\t'
            << s->description << '\n';
      }
    };
  });
  auto* export_cmd = scen_cmd->add_subcommand("export", "Write every scenario as <name>.json");
  std::string export_dir;
  export_cmd->add_option("--dir", export_dir, "Target directory")->required();
  export_cmd->callback([&] {
    action = [&] {
      const ScenarioStore st = store();
      std::error_code ec;
      fs::create_directories(export_dir, ec);
      for (const Scenario* s : st.scenarios())
        emit(scenario_to_json(*s).dump(2) + "\n", (fs::path(export_dir) / (s->name + ".json")).string(), out);
      out << st.size() << " scenarios written to " << export_dir << '\n';
    };
  });

  std::vector<const char*> argv{"curvemetrics"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << describe(e) << '\n';
    return kExitValidation;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DegenerateScopeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerateScope;
  } catch (const UnwritableError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnwritable;
  } catch (const UnsupportedOperationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SingularFitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace curvemetrics::app

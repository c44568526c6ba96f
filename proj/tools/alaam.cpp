#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "alaam/csv.hpp"
#include "alaam/deviance.hpp"
#include "alaam/errors.hpp"
#include "alaam/evidence.hpp"
#include "alaam/gof.hpp"
#include "alaam/mnar.hpp"
#include "alaam/run_config.hpp"
#include "alaam/summary.hpp"
#include "alaam/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace alaam;

namespace {

// Files written by the current command, relative to the output directory.
struct RunOutput {
  fs::path dir;
  std::vector<std::string> files;
  json diagnostics = json::object();

  CsvWriter open(const std::string& name) {
    files.push_back(name);
    return CsvWriter((dir / name).string());
  }
};

const std::vector<std::string> kSummaryHeader = {
    "term", "mean", "sd", "ESS", "SACF10", "SACF30", "q2.5", "q97.5"};

void write_summary_rows(CsvWriter& csv, const SummaryTable& table) {
  for (const ParameterSummary& row : table.rows)
    csv.row({row.name, csv_number(row.mean), csv_number(row.sd),
             csv_number(row.ess), csv_number(row.sacf10),
             csv_number(row.sacf30), csv_number(row.q025),
             csv_number(row.q975)});
}

void write_draw_matrix(RunOutput& out, const std::string& name,
                       const std::vector<std::string>& columns,
                       const Eigen::MatrixXd& draws) {
  CsvWriter csv = out.open(name);
  std::vector<std::string> header = {"draw"};
  header.insert(header.end(), columns.begin(), columns.end());
  csv.row(header);
  for (Eigen::Index t = 0; t < draws.rows(); ++t) {
    std::vector<std::string> row = {std::to_string(t + 1)};
    for (Eigen::Index k = 0; k < draws.cols(); ++k)
      row.push_back(csv_number(draws(t, k)));
    csv.row(row);
  }
  csv.close();
}

std::vector<std::string> battery_names() {
  std::vector<std::string> names;
  for (const auto& name : gof_statistic_names())
    names.emplace_back(name);
  return names;
}

std::string model_label(const ModelSpec& spec) {
  std::string label;
  for (const EffectTerm& term : spec.terms) {
    if (!label.empty()) label += '+';
    label += term.name();
  }
  return label;
}

// phi1 entering the likelihood evaluations: the fixed value, or the
// posterior mean when the mechanism was estimated.
double likelihood_tilt(const MissingMechanism& mechanism,
                       const PosteriorSample& sample, int burnin) {
  if (mechanism.mode != MissingMode::mnar_estimated || sample.phi.rows() == 0)
    return mechanism.imputation_tilt(mechanism.phi);
  double total = 0;
  int count = 0;
  for (int t = burnin; t < sample.draw_count(); ++t) {
    total += sample.phi(t, 1);
    ++count;
  }
  return count > 0 ? total / count : mechanism.imputation_tilt(mechanism.phi);
}

void check_models(const std::vector<ModelSpec>& models,
                  const AttributeData& data) {
  for (const ModelSpec& spec : models) {
    const std::vector<std::string> problems = validate_spec(spec, data);
    if (!problems.empty()) {
      std::string message = "invalid model:";
      for (const std::string& p : problems) message += " " + p + ";";
      message.pop_back();
      throw ConfigError(message);
    }
  }
}

void cmd_simulate(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const CompiledModel model(pr.graph, pr.spec, pr.data);
  const Eigen::VectorXd theta =
      require_theta(config, model.parameter_count());

  SimulationSettings settings = build_simulation_settings(config);
  std::vector<std::uint8_t> start = pr.data.outcome();
  for (int i = 0; i < pr.data.node_count(); ++i)
    if (pr.data.missing()[i]) start[i] = 2;
  settings.record_outcomes = false;

  const SimulationOutput draws =
      sample(model, theta, settings, &pr.clamp, &start);
  write_draw_matrix(out, "draws.csv", pr.spec.term_names(), draws.statistics);
}

void cmd_estimate(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const CompiledModel model(pr.graph, pr.spec, pr.data);
  const Prior prior = build_prior(config, model, pr.data, pr.clamp);
  const MissingMechanism mechanism = build_mechanism(config);
  const RunSettings settings = build_run_settings(config);
  const int burnin = summary_burnin(config);
  const int thin = summary_thin(config);

  const std::vector<PosteriorSample> samples =
      run_chains(pr.graph, pr.data, pr.spec, prior, mechanism, pr.clamp,
                 settings);
  const std::vector<std::string> names = pr.spec.term_names();
  const bool single = samples.size() == 1;

  std::vector<Eigen::MatrixXd> theta_chains;
  std::vector<Eigen::MatrixXd> phi_chains;
  for (std::size_t c = 0; c < samples.size(); ++c) {
    const std::string suffix =
        single ? "" : "_chain" + std::to_string(c + 1);
    write_draw_matrix(out, "draws" + suffix + ".csv", names,
                      samples[c].theta);
    write_draw_matrix(out, "predictive" + suffix + ".csv", battery_names(),
                      samples[c].pred_battery);
    if (samples[c].phi.rows() > 0) {
      write_draw_matrix(out, "phi" + suffix + ".csv",
                        {"phi0", "phi1", "phi2"}, samples[c].phi);
      phi_chains.push_back(samples[c].phi);
    }
    theta_chains.push_back(samples[c].theta);
  }

  SummaryTable table = summarize_pooled(theta_chains, names, burnin, thin);
  if (mechanism.mode == MissingMode::mnar_estimated && !phi_chains.empty()) {
    const SummaryTable phi_table = summarize_pooled(
        phi_chains, {"phi0", "phi1", "phi2"}, burnin, thin);
    table.rows.insert(table.rows.end(), phi_table.rows.begin(),
                      phi_table.rows.end());
  }
  CsvWriter summary = out.open("summary.csv");
  summary.row(kSummaryHeader);
  write_summary_rows(summary, table);
  summary.close();

  if (!samples.front().missing_nodes.empty()) {
    CsvWriter imputations = out.open("imputations.csv");
    imputations.row({"node", "mean"});
    const std::vector<int>& nodes = samples.front().missing_nodes;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      double total = 0;
      int count = 0;
      for (const PosteriorSample& s : samples)
        for (int t = burnin; t < s.draw_count(); ++t) {
          total += s.imputations(t, static_cast<Eigen::Index>(m));
          ++count;
        }
      imputations.row({std::to_string(nodes[m]),
                       csv_number(count > 0 ? total / count : 0)});
    }
    imputations.close();
  }

  json rates = json::array();
  for (const PosteriorSample& s : samples) {
    json r;
    r["exchange"] = s.acceptance_rate;
    r["imputation"] = s.imputation_acceptance_rate;
    r["phi"] = s.phi_acceptance_rate;
    rates.push_back(r);
  }
  out.diagnostics["acceptance_rates"] = rates;
}

void cmd_gof(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const CompiledModel model(pr.graph, pr.spec, pr.data);
  const Prior prior = build_prior(config, model, pr.data, pr.clamp);
  const MissingMechanism mechanism = build_mechanism(config);
  const RunSettings settings = build_run_settings(config);
  const int burnin = summary_burnin(config);
  const int thin = summary_thin(config);

  const PosteriorSample sample = run_estimation(
      pr.graph, pr.data, pr.spec, prior, mechanism, pr.clamp, settings);
  const GofTable table =
      config.get_bool("evaluate", "battery", true)
          ? gof(sample, pr.data.outcome(), pr.graph, burnin, thin)
          : gof_model_terms(sample, model, pr.data.outcome(), burnin, thin);

  CsvWriter csv = out.open("gof.csv");
  csv.row({"statistic", "observed", "predictive_mean", "p"});
  for (const GofRow& row : table.rows)
    csv.row({row.name, csv_number(row.observed),
             csv_number(row.predictive_mean), csv_number(row.p)});
  csv.close();
  out.diagnostics["predictive_draws_used"] = table.draws_used;
}

void cmd_loglik(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const CompiledModel model(pr.graph, pr.spec, pr.data);
  const Eigen::VectorXd theta =
      require_theta(config, model.parameter_count());
  const MissingMechanism mechanism = build_mechanism(config);
  const PathSettings path = build_path_settings(config);

  const LoglikResult result =
      log_likelihood(model, pr.data, theta,
                     mechanism.imputation_tilt(mechanism.phi), pr.clamp, path);

  CsvWriter csv = out.open("loglik.csv");
  csv.row({"log_likelihood", "std_error"});
  csv.row({csv_number(result.value), csv_number(result.std_error)});
  csv.close();
}

void cmd_dic(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const std::vector<ModelSpec> models = evaluation_models(config);
  check_models(models, pr.data);
  const MissingMechanism mechanism = build_mechanism(config);
  const RunSettings settings = build_run_settings(config);
  DevianceSettings deviance_settings;
  deviance_settings.burnin = summary_burnin(config);
  deviance_settings.thin = summary_thin(config);
  deviance_settings.path = build_path_settings(config);

  CsvWriter csv = out.open("dic.csv");
  csv.row({"model", "d_bar", "d_at_mean", "p_d", "p_v", "dic_pd", "dic_pv"});
  for (std::size_t k = 0; k < models.size(); ++k) {
    const CompiledModel model(pr.graph, models[k], pr.data);
    const Prior prior = build_prior(config, model, pr.data, pr.clamp);
    const PosteriorSample sample = run_estimation(
        pr.graph, pr.data, models[k], prior, mechanism, pr.clamp, settings);
    const double tilt =
        likelihood_tilt(mechanism, sample, deviance_settings.burnin);
    const auto [dev, dic] = deviance_and_dic(model, pr.data, pr.clamp, sample,
                                             tilt, deviance_settings);
    csv.row({model_label(models[k]), csv_number(dic.d_bar),
             csv_number(dic.d_at_mean), csv_number(dic.p_d),
             csv_number(dic.p_v), csv_number(dic.dic_pd),
             csv_number(dic.dic_pv)});

    const std::string cdf_name =
        models.size() == 1 ? "deviance_cdf.csv"
                           : "deviance_cdf_" + std::to_string(k + 1) + ".csv";
    CsvWriter cdf = out.open(cdf_name);
    cdf.row({"deviance", "cumulative_probability"});
    for (const auto& [value, probability] : deviance_cdf(dev.deviance))
      cdf.row({csv_number(value), csv_number(probability)});
    cdf.close();
  }
  csv.close();
}

void cmd_evidence(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const std::string prior_type = config.get_string("prior", "type", "flat");
  if (prior_type == "flat")
    throw PreconditionError(
        "evidence requires a proper prior: set prior.type to normal or "
        "normal-scaled");
  const std::vector<ModelSpec> models = evaluation_models(config);
  check_models(models, pr.data);
  const MissingMechanism mechanism = build_mechanism(config);
  const RunSettings settings = build_run_settings(config);
  const PathSettings path = build_path_settings(config);
  const OrdinateSettings ordinate = build_ordinate_settings(config);
  const int burnin = summary_burnin(config);

  CsvWriter csv = out.open("evidence.csv");
  csv.row({"model", "lambda", "log_likelihood", "log_likelihood_se",
           "log_prior", "log_ordinate", "ordinate_se", "log_evidence",
           "std_error"});
  const auto write_point = [&](const std::string& label, double lambda,
                               bool has_lambda, const EvidenceResult& r) {
    csv.row({label, has_lambda ? csv_number(lambda) : "NA",
             csv_number(r.log_likelihood), csv_number(r.log_likelihood_se),
             csv_number(r.log_prior), csv_number(r.log_ordinate),
             csv_number(r.ordinate_se), csv_number(r.log_evidence),
             csv_number(r.std_error)});
  };

  const std::vector<double> lambdas =
      config.get_doubles("evaluate", "lambda-grid");
  if (!lambdas.empty()) {
    if (prior_type != "normal-scaled")
      throw ConfigError(
          "evaluate.lambda-grid needs prior.type = normal-scaled");
    EvidenceCurveSettings curve;
    curve.run = settings;
    curve.path = path;
    curve.ordinate = ordinate;
    curve.summary_burnin = burnin;
    if (config.get_string("prior", "center", "zero") == "data") {
      const double ybar = std::min(
          std::max(pr.data.observed_mean(), 1e-6), 1.0 - 1e-6);
      curve.prior_center_intercept = std::log(ybar / (1.0 - ybar));
    }
    const std::vector<EvidencePoint> points = evidence_curve(
        pr.graph, pr.data, models, lambdas, mechanism, pr.clamp, curve);
    for (const EvidencePoint& point : points)
      write_point(model_label(models[static_cast<std::size_t>(
                      point.model_index)]),
                  point.lambda, true, point.result);
  } else {
    for (const ModelSpec& spec : models) {
      const CompiledModel model(pr.graph, spec, pr.data);
      const Prior prior = build_prior(config, model, pr.data, pr.clamp);
      const PosteriorSample sample = run_estimation(
          pr.graph, pr.data, spec, prior, mechanism, pr.clamp, settings);
      const Proposal proposal(sample.proposal_covariance);
      const double tilt = likelihood_tilt(mechanism, sample, burnin);
      const EvidenceResult result =
          evidence_at(model, pr.data, pr.clamp, prior, proposal, sample, tilt,
                      Eigen::VectorXd(), path, ordinate);
      const bool scaled = prior_type == "normal-scaled";
      write_point(model_label(spec), config.get_double("prior", "lambda", 0),
                  scaled, result);
    }
  }
  csv.close();
}

void cmd_mnar_sweep(const RunConfig& config, RunOutput& out) {
  const Problem pr = load_problem(config);
  const std::vector<double> grid =
      config.get_doubles("evaluate", "phi1-grid");
  if (grid.empty()) throw ConfigError("evaluate.phi1-grid required");
  const CompiledModel model(pr.graph, pr.spec, pr.data);
  const Prior prior = build_prior(config, model, pr.data, pr.clamp);
  const RunSettings settings = build_run_settings(config);

  const std::vector<MnarSweepPoint> points =
      mnar_sweep(pr.graph, pr.data, pr.spec, prior, pr.clamp, settings, grid,
                 summary_burnin(config), summary_thin(config));

  CsvWriter csv = out.open("mnar_sweep.csv");
  std::vector<std::string> header = {"phi1"};
  header.insert(header.end(), kSummaryHeader.begin(), kSummaryHeader.end());
  csv.row(header);
  for (const MnarSweepPoint& point : points)
    for (const ParameterSummary& row : point.summary.rows)
      csv.row({csv_number(point.phi1), row.name, csv_number(row.mean),
               csv_number(row.sd), csv_number(row.ess),
               csv_number(row.sacf10), csv_number(row.sacf30),
               csv_number(row.q025), csv_number(row.q975)});
  csv.close();
}

void write_manifest(const RunConfig& config, const std::string& command,
                    RunOutput& out, double seconds) {
  json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["seed"] = config.get_int("sampler", "seed", 1);
  manifest["config"] = config.serialize();
  manifest["outputs"] = out.files;
  manifest["timings"]["total_seconds"] = seconds;
  if (!out.diagnostics.empty()) manifest["diagnostics"] = out.diagnostics;

  const fs::path final_path = out.dir / "manifest.json";
  const fs::path tmp_path = out.dir / "manifest.json.tmp";
  {
    std::ofstream stream(tmp_path, std::ios::binary);
    if (!stream) throw Error("cannot write " + tmp_path.string());
    stream << manifest.dump(2) << '\n';
  }
  fs::rename(tmp_path, final_path);
}

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, const std::vector<std::string>& sets) {
  const auto started = std::chrono::steady_clock::now();
  RunConfig config = RunConfig::load(config_path);
  for (const std::string& assignment : sets) config.set(assignment);

  RunOutput out;
  out.dir = out_dir;
  fs::create_directories(out.dir);

  {
    std::ofstream copy(out.dir / "config.ini", std::ios::binary);
    if (!copy) throw Error("cannot write config copy");
    copy << config.serialize();
  }
  out.files.push_back("config.ini");

  if (command == "simulate")
    cmd_simulate(config, out);
  else if (command == "estimate")
    cmd_estimate(config, out);
  else if (command == "gof")
    cmd_gof(config, out);
  else if (command == "loglik")
    cmd_loglik(config, out);
  else if (command == "dic")
    cmd_dic(config, out);
  else if (command == "evidence")
    cmd_evidence(config, out);
  else if (command == "mnar-sweep")
    cmd_mnar_sweep(config, out);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  write_manifest(config, command, out, seconds);
  std::cout << command << ": wrote " << out.files.size()
            << " files to " << out.dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inference for autologistic actor-attribute models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "draw outcome statistics at fixed parameters"},
      {"estimate", "sample the posterior by the exchange algorithm"},
      {"gof", "posterior predictive goodness-of-fit battery"},
      {"loglik", "path-sampler log-likelihood at a parameter point"},
      {"dic", "posterior deviance and both DIC variants"},
      {"evidence", "marginal likelihood via the posterior ordinate"},
      {"mnar-sweep", "posterior sensitivity to the missingness parameter"}};
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("-c,--config", config_path, "run configuration file")
        ->required();
    sub->add_option("-o,--out", out_dir, "output directory")->required();
    sub->add_option("--set", sets, "override a config key (section.key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path, out_dir, sets);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

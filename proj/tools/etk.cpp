#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "etk/json_io.hpp"
#include "etk/multichannel.hpp"
#include "etk/parallel.hpp"

namespace {

using namespace etk;

Json envelope(const std::string& command, Json config, Json result) {
  config["command"] = command;
  return Json{{"version", kVersion},
              {"config", std::move(config)},
              {"result", std::move(result)}};
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InvalidInput("cannot open output file: " + out_path);
  f << text;
}

void emit_json(const Json& j, const std::string& out_path) {
  emit_text(j.dump(2) + "\n", out_path);
}

std::pair<int, int> parse_dims(std::string spec) {
  for (char& c : spec)
    if (c == 'x' || c == 'X') c = ',';
  const auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw InvalidInput("dims must look like 3,3 or 3x3");
  try {
    const int a = std::stoi(spec.substr(0, comma));
    const int b = std::stoi(spec.substr(comma + 1));
    if (a < 1 || b < 1) throw InvalidInput("dims must be positive");
    return {a, b};
  } catch (const InvalidInput&) {
    throw;
  } catch (...) {
    throw InvalidInput("dims must look like 3,3 or 3x3");
  }
}

Json certificate_json(const RobustnessCertificate& cert) {
  Json oracle{{"restarts", cert.witness.oracle_restarts},
              {"seed", cert.witness.oracle_seed},
              {"value", cert.witness.oracle_value},
              {"certified", cert.oracle_certified},
              {"repaired", cert.witness.repaired}};
  Json j{{"k", cert.k},
         {"dims", Json::array({cert.dim_a, cert.dim_b})},
         {"lower", cert.lower},
         {"upper", cert.upper},
         {"gap", cert.gap()},
         {"rounds", cert.rounds},
         {"active_set_size", cert.active_columns},
         {"witness", matrix_to_json(cert.witness.op)},
         {"witness_value", cert.witness.value},
         {"oracle", std::move(oracle)}};
  if (cert.has_ppt) j["ppt_value"] = cert.ppt_value;
  return j;
}

std::string certificate_csv(const RobustnessCertificate& cert) {
  std::ostringstream s;
  s.precision(17);
  s << "k,lower,upper,gap,ppt_value,rounds,active_set_size\n";
  s << cert.k << ',' << cert.lower << ',' << cert.upper << ',' << cert.gap()
    << ',';
  if (cert.has_ppt) s << cert.ppt_value;
  s << ',' << cert.rounds << ',' << cert.active_columns << '\n';
  return s.str();
}

struct RobustnessArgs {
  std::string input, dims_spec, out_format = "json", out_path;
  int k = 1;
  uint64_t seed = 7;
  int restarts = 128;
  int rounds = 60;
  double tol = 1e-8;
  int reversal = 0;
};

void run_robustness(const RobustnessArgs& args) {
  RobustnessOptions opts;
  opts.seed = args.seed;
  opts.final_restarts = args.restarts;
  opts.max_rounds = args.rounds;
  opts.sdp_tol = args.tol;

  Json config{{"k", args.k},         {"seed", args.seed},
              {"restarts", args.restarts}, {"rounds", args.rounds},
              {"tol", args.tol},     {"out", args.out_format}};

  if (args.reversal > 0) {
    if (args.dims_spec.empty())
      throw InvalidInput("--reversal-search needs --dims");
    const auto [da, db] = parse_dims(args.dims_spec);
    const int k2 = args.k + 1;
    if (k2 > std::min(da, db))
      throw InvalidInput("reversal search needs k + 1 <= min(dims)");
    config["dims"] = Json::array({da, db});
    config["reversal_search"] = args.reversal;

    RobustnessOptions light = opts;
    light.max_rounds = std::min(light.max_rounds, 25);
    light.final_restarts = std::min(light.final_restarts, 48);
    light.compute_ppt = false;

    Json pairs = Json::array();
    int found = 0;
    for (int i = 0; i < args.reversal; ++i) {
      Rng rng_rho(mix_seed(args.seed, 2 * i));
      Rng rng_sigma(mix_seed(args.seed, 2 * i + 1));
      const BipartiteState rho = random_state(rng_rho, da, db);
      const BipartiteState sigma = random_state(rng_sigma, da, db);
      const RobustnessCertificate rk = robustness_bounds(rho, args.k, light);
      const RobustnessCertificate sk = robustness_bounds(sigma, args.k, light);
      const RobustnessCertificate rk2 = robustness_bounds(rho, k2, light);
      const RobustnessCertificate sk2 = robustness_bounds(sigma, k2, light);
      const bool forward = rk.upper < sk.lower && rk2.lower > sk2.upper;
      const bool backward = sk.upper < rk.lower && sk2.lower > rk2.upper;
      if (forward || backward) ++found;
      pairs.push_back(Json{
          {"pair", i},
          {"rho_interval_k", Json::array({rk.lower, rk.upper})},
          {"sigma_interval_k", Json::array({sk.lower, sk.upper})},
          {"rho_interval_k2", Json::array({rk2.lower, rk2.upper})},
          {"sigma_interval_k2", Json::array({sk2.lower, sk2.upper})},
          {"reversal", forward || backward}});
    }
    emit_json(envelope("robustness", config,
                       Json{{"k", args.k},
                            {"k2", k2},
                            {"pairs", std::move(pairs)},
                            {"reversals_found", found}}),
              args.out_path);
    return;
  }

  if (args.input.empty()) throw InvalidInput("--input is required");
  config["input"] = args.input;
  const BipartiteState rho = state_from_json(load_json_file(args.input));
  const RobustnessCertificate cert = robustness_bounds(rho, args.k, opts);
  if (args.out_format == "csv")
    emit_text(certificate_csv(cert), args.out_path);
  else
    emit_json(envelope("robustness", config, certificate_json(cert)),
              args.out_path);
}

Json advantage_json(const AdvantageReport& rep) {
  return Json{{"c", rep.c},
              {"value_with_rho", rep.value_with_rho},
              {"bound_Sk", rep.bound_sk},
              {"margin", rep.margin},
              {"p_guess_rho", rep.p_guess_rho},
              {"p_guess_Sk", rep.p_guess_sk}};
}

struct BinaryArgs {
  int d = 2, k = 1;
  double t = 0;  // 0 means 1/k
  bool t_set = false;
  std::string sweep, out_format = "json", out_path;
};

void run_binary(const BinaryArgs& args) {
  const double t = args.t_set ? args.t : 1.0 / args.k;
  Json config{{"d", args.d}, {"k", args.k}, {"t", t}, {"out", args.out_format}};

  if (!args.sweep.empty()) {
    double t0 = 0, t1 = 0;
    int steps = 0;
    {
      std::istringstream s(args.sweep);
      char c1 = 0, c2 = 0;
      if (!(s >> t0 >> c1 >> t1 >> c2 >> steps) || c1 != ':' || c2 != ':' ||
          steps < 2)
        throw InvalidInput("--sweep-t must look like t0:t1:steps");
    }
    config["sweep_t"] = args.sweep;
    std::vector<Json> rows(steps);
    parallel_for(steps, [&](int i) {
      const double ti = t0 + (t1 - t0) * i / (steps - 1);
      Json row{{"t", ti}};
      try {
        const ReductionFamilyMap fam = reduction_family(args.d, ti);
        row["positivity_level"] = fam.positivity_level;
        const AdvantageReport rep =
            binary_advantage(max_entangled(args.d), args.k, fam);
        row.update(advantage_json(rep));
      } catch (const CertificationFailure&) {
        row["skipped"] = "map is not k-positive at this t";
      }
      rows[i] = std::move(row);
    });
    if (args.out_format == "csv") {
      std::ostringstream s;
      s.precision(17);
      s << "t,positivity_level,c,value_with_rho,bound_Sk,margin,p_guess_rho,"
           "p_guess_Sk\n";
      for (const Json& row : rows) {
        s << row["t"].get<double>() << ','
          << (row.contains("positivity_level")
                  ? std::to_string(row["positivity_level"].get<int>())
                  : std::string());
        if (row.contains("c"))
          s << ',' << row["c"].get<double>() << ','
            << row["value_with_rho"].get<double>() << ','
            << row["bound_Sk"].get<double>() << ','
            << row["margin"].get<double>() << ','
            << row["p_guess_rho"].get<double>() << ','
            << row["p_guess_Sk"].get<double>();
        else
          s << ",,,,,,";
        s << '\n';
      }
      emit_text(s.str(), args.out_path);
    } else {
      emit_json(envelope("binary-demo", config, Json{{"sweep", rows}}),
                args.out_path);
    }
    return;
  }

  const ReductionFamilyMap fam = reduction_family(args.d, t);
  const AdvantageReport rep = binary_advantage(max_entangled(args.d), args.k, fam);
  if (args.out_format == "csv") {
    std::ostringstream s;
    s.precision(17);
    s << "visibility,value_with_rho,p_guess_rho,margin\n";
    const int n = args.d * args.d;
    const Mat phi = max_entangled(args.d).rho;
    for (int i = 0; i <= 20; ++i) {
      const double p = i / 20.0;
      const Mat mix = p * phi + (1.0 - p) * Mat::Identity(n, n) / n;
      const BipartiteState rho_p = make_state(mix, args.d, args.d);
      const Mat mapped = apply_partial_op(fam.channel, rho_p.rho, args.d);
      const double value = rep.c * (trace_norm(mapped) + 1.0);
      s << p << ',' << value << ',' << 0.5 + value / 4.0 << ','
        << std::max(0.0, value - rep.bound_sk) << '\n';
    }
    emit_text(s.str(), args.out_path);
  } else {
    Json result = advantage_json(rep);
    result["positivity_level"] = fam.positivity_level;
    emit_json(envelope("binary-demo", config, std::move(result)),
              args.out_path);
  }
}

struct MultichannelArgs {
  std::string input, out_format = "json", out_path;
  int k = 1;
  uint64_t seed = 7;
  int restarts = 128;
  int samples = 0;
};

void run_multichannel(const MultichannelArgs& args) {
  if (args.input.empty()) throw InvalidInput("--input is required");
  RobustnessOptions opts;
  opts.seed = args.seed;
  opts.final_restarts = args.restarts;
  Json config{{"input", args.input},
              {"k", args.k},
              {"seed", args.seed},
              {"restarts", args.restarts},
              {"samples", args.samples},
              {"out", args.out_format}};
  const BipartiteState rho = state_from_json(load_json_file(args.input));
  const RatioCertificate rc = advantage_ratio(rho, args.k, opts);
  Json result{{"d_A", rc.task_dim_a},
              {"k", args.k},
              {"c", rc.c},
              {"p_guess_rho", rc.p_guess},
              {"bound_Sk", rc.bound},
              {"ratio", rc.ratio},
              {"robustness_interval",
               Json::array({rc.cert.lower, rc.cert.upper})},
              {"oracle_certified", rc.cert.oracle_certified}};
  if (args.samples > 0) {
    const SkCeiling ceiling =
        bound_S_k(rc.task, args.k, args.samples, mix_seed(args.seed, 0xB0));
    result["empirical_Sk_max"] = ceiling.empirical_max;
    result["empirical_samples"] = ceiling.samples;
  }
  if (args.out_format == "csv") {
    std::ostringstream s;
    s.precision(17);
    s << "k,c,p_guess_rho,bound_Sk,ratio,lower,upper\n"
      << args.k << ',' << rc.c << ',' << rc.p_guess << ',' << rc.bound << ','
      << rc.ratio << ',' << rc.cert.lower << ',' << rc.cert.upper << '\n';
    emit_text(s.str(), args.out_path);
  } else {
    emit_json(envelope("multichannel-demo", config, std::move(result)),
              args.out_path);
  }
}

struct CertifyArgs {
  std::string input, state_path, dims_spec, out_path;
  int k = 1;
  uint64_t seed = 1;
  int restarts = 64;
};

void run_certify(const CertifyArgs& args) {
  if (args.input.empty()) throw InvalidInput("--input is required");
  if (args.dims_spec.empty()) throw InvalidInput("--dims is required");
  const auto [da, db] = parse_dims(args.dims_spec);
  const Mat w = matrix_from_json(load_json_file(args.input));
  if (w.rows() != static_cast<Eigen::Index>(da) * db)
    throw InvalidInput("witness does not match --dims");
  Json config{{"input", args.input},
              {"dims", Json::array({da, db})},
              {"k", args.k},
              {"seed", args.seed},
              {"restarts", args.restarts}};

  SchmidtMinOptions opts;
  opts.restarts = args.restarts;
  opts.seed = args.seed;
  opts.keep_violators = 0;
  Json result;
  if (!args.state_path.empty()) {
    config["state"] = args.state_path;
    const BipartiteState rho =
        state_from_json(load_json_file(args.state_path));
    const WitnessVerdict v = sn_witness_lower_bound(rho, args.k, w, opts);
    result = Json{{"feasible", true},
                  {"oracle_value", v.oracle_value},
                  {"witness_value", v.value},
                  {"detected", v.detected},
                  {"margin", v.margin}};
  } else {
    const SchmidtMinResult res =
        min_schmidt_k_expectation(w, da, db, args.k, opts);
    if (res.value < -default_tols().oracle_eps) {
      std::ostringstream msg;
      msg << "witness infeasible: oracle found expectation " << res.value
          << " on the rank-" << args.k << " set";
      throw CertificationFailure(msg.str());
    }
    result = Json{{"feasible", true}, {"oracle_value", res.value}};
  }
  result["restarts"] = args.restarts;
  result["seed"] = args.seed;
  emit_json(envelope("witness-certify", config, std::move(result)),
            args.out_path);
}

struct ChoiArgs {
  std::string map_spec, out_path;
};

void run_choi(const ChoiArgs& args) {
  const auto colon = args.map_spec.find(':');
  if (colon == std::string::npos)
    throw InvalidInput(
        "--map must look like reduction:d,t or identity:d or depolarizing:d");
  const std::string kind = args.map_spec.substr(0, colon);
  const std::string rest = args.map_spec.substr(colon + 1);
  Json config{{"map", args.map_spec}};
  Json result;
  if (kind == "reduction") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw InvalidInput("reduction map needs d,t");
    int d = 0;
    double t = 0;
    try {
      d = std::stoi(rest.substr(0, comma));
      t = std::stod(rest.substr(comma + 1));
    } catch (...) {
      throw InvalidInput("reduction map needs numeric d,t");
    }
    const ReductionFamilyMap fam = reduction_family(d, t);
    result["channel"] = channel_to_json(fam.channel);
    result["t"] = fam.t;
    result["positivity_level"] = fam.positivity_level;
    Json eigs = Json::array();
    for (Eigen::Index i = 0; i < fam.choi_min_eig_by_level.size(); ++i)
      eigs.push_back(fam.choi_min_eig_by_level[i]);
    result["min_eig_by_level"] = std::move(eigs);
  } else {
    int d = 0;
    try {
      d = std::stoi(rest);
    } catch (...) {
      throw InvalidInput("map spec needs a numeric dimension");
    }
    ChannelRep ch;
    if (kind == "identity")
      ch = identity_channel(d);
    else if (kind == "depolarizing")
      ch = depolarizing_channel(d);
    else
      throw InvalidInput("unknown map kind: " + kind);
    result["channel"] = channel_to_json(ch);
  }
  const ChannelRep ch = channel_from_json(result["channel"]);
  result["tp_residual"] = is_tp(ch).residual;
  result["cp_residual"] = is_cp(ch).residual;
  result["unital_residual"] = is_unital(ch).residual;
  emit_json(envelope("choi", config, std::move(result)), args.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schmidt-number toolkit: robustness, discrimination, and "
               "channel-task certificates"};
  app.require_subcommand(1);

  RobustnessArgs rob;
  CLI::App* rob_cmd =
      app.add_subcommand("robustness", "two-sided schmidt-number robustness");
  rob_cmd->add_option("--input", rob.input, "state JSON file");
  rob_cmd->add_option("--k", rob.k, "schmidt-number level")->required();
  rob_cmd->add_option("--dims", rob.dims_spec, "dims for --reversal-search");
  rob_cmd->add_option("--seed", rob.seed, "rng seed");
  rob_cmd->add_option("--restarts", rob.restarts, "certification restarts");
  rob_cmd->add_option("--rounds", rob.rounds, "cutting-plane round cap");
  rob_cmd->add_option("--tol", rob.tol, "SDP tolerance");
  rob_cmd->add_option("--out", rob.out_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  rob_cmd->add_option("--output", rob.out_path, "output file (default stdout)");
  rob_cmd->add_option("--reversal-search", rob.reversal,
                      "sample this many random pairs hunting for interval "
                      "order reversal between k and k+1");

  BinaryArgs bin;
  CLI::App* bin_cmd = app.add_subcommand(
      "binary-demo", "binary channel pair built from the reduction family");
  bin_cmd->add_option("--d", bin.d, "local dimension")->required();
  bin_cmd->add_option("--k", bin.k, "positivity level to certify")->required();
  bin_cmd->add_option("--t", bin.t, "family parameter (default 1/k)");
  bin_cmd->add_option("--sweep-t", bin.sweep, "t0:t1:steps sweep");
  bin_cmd->add_option("--out", bin.out_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bin_cmd->add_option("--output", bin.out_path, "output file (default stdout)");

  MultichannelArgs mc;
  CLI::App* mc_cmd = app.add_subcommand(
      "multichannel-demo", "dense-coding style task from the optimal witness");
  mc_cmd->add_option("--input", mc.input, "state JSON file")->required();
  mc_cmd->add_option("--k", mc.k, "schmidt-number level")->required();
  mc_cmd->add_option("--seed", mc.seed, "rng seed");
  mc_cmd->add_option("--restarts", mc.restarts, "certification restarts");
  mc_cmd->add_option("--samples", mc.samples,
                     "sampled rank-k inputs for the empirical ceiling");
  mc_cmd->add_option("--out", mc.out_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  mc_cmd->add_option("--output", mc.out_path, "output file (default stdout)");

  CertifyArgs cert;
  CLI::App* cert_cmd = app.add_subcommand(
      "witness-certify", "oracle feasibility check for a witness operator");
  cert_cmd->add_option("--input", cert.input, "witness matrix JSON file")
      ->required();
  cert_cmd->add_option("--dims", cert.dims_spec, "bipartite dims, e.g. 3,3")
      ->required();
  cert_cmd->add_option("--k", cert.k, "schmidt-number level")->required();
  cert_cmd->add_option("--state", cert.state_path,
                       "optional state JSON to evaluate the witness on");
  cert_cmd->add_option("--seed", cert.seed, "rng seed");
  cert_cmd->add_option("--restarts", cert.restarts, "oracle restarts");
  cert_cmd->add_option("--output", cert.out_path,
                       "output file (default stdout)");

  ChoiArgs choi;
  CLI::App* choi_cmd =
      app.add_subcommand("choi", "emit the Choi data of a named map");
  choi_cmd->add_option("--map", choi.map_spec,
                       "reduction:d,t | identity:d | depolarizing:d")
      ->required();
  choi_cmd->add_option("--output", choi.out_path,
                       "output file (default stdout)");

  try {
    app.parse(argc, argv);
    bin.t_set = bin_cmd->count("--t") > 0;
    if (rob_cmd->parsed()) run_robustness(rob);
    if (bin_cmd->parsed()) run_binary(bin);
    if (mc_cmd->parsed()) run_multichannel(mc);
    if (cert_cmd->parsed()) run_certify(cert);
    if (choi_cmd->parsed()) run_choi(choi);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const CertificationFailure& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 4;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

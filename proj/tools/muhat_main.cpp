// muhat: configuration-driven construction and verification runs.
//   muhat construct --config cfg.json --out DIR
//   muhat verify    --config cfg.json --out DIR --suite all
//   muhat plotdata  --config cfg.json --out DIR [--smax N] [--thin N]
// Exit codes: 0 pass, 1 any check failed, 2 strict-mode refusal,
// 3 hypothesis-unmet only.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "muhat/config.hpp"
#include "muhat/hausdorff.hpp"
#include "muhat/verify.hpp"

namespace fs = std::filesystem;
using namespace muhat;

namespace {

struct BuiltRun {
  RunConfig cfg;
  std::shared_ptr<const InghamMollifier> moll;
  ScaleSchedule slow;
  RajchmanSchedule fast;
  std::vector<FactorSpectrum> factors;
};

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BuiltRun build_run(RunConfig cfg) {
  BuiltRun run;
  run.cfg = std::move(cfg);
  run.moll = std::make_shared<InghamMollifier>(run.cfg.mollifier);
  if (run.cfg.schedule_variant == "slow") {
    run.slow = build_schedule_slow(run.cfg.slow_spec, run.cfg.profile, run.cfg.chi);
    int k = 1;
    for (const auto& b : run.slow.blocks)
      run.factors.push_back(
          make_factor_slow(b, run.cfg.profile, run.cfg.chi, run.moll, k++));
  } else {
    run.fast = build_schedule_fast(run.cfg.fast_spec, run.cfg.profile);
    int k = 1;
    for (const auto& st : run.fast.stages)
      run.factors.push_back(make_factor_fast(st, run.cfg.profile, run.moll, k++));
  }
  return run;
}

BuiltRun rebuild_from_artifacts(RunConfig cfg, const fs::path& out) {
  // Reproducible without re-sieving: schedules reload from the artifact.
  std::ifstream in(out / "schedule.json");
  if (!in) throw std::runtime_error("missing artifact: schedule.json (run construct first)");
  nlohmann::json js;
  in >> js;
  BuiltRun run;
  run.cfg = std::move(cfg);
  run.moll = std::make_shared<InghamMollifier>(run.cfg.mollifier);
  if (js.at("variant") == "slow") {
    run.slow = slow_schedule_from_json(js);
    int k = 1;
    for (const auto& b : run.slow.blocks)
      run.factors.push_back(make_factor_slow(b, run.cfg.profile, run.cfg.chi, run.moll, k++));
  } else {
    run.fast = fast_schedule_from_json(js);
    int k = 1;
    for (const auto& st : run.fast.stages)
      run.factors.push_back(make_factor_fast(st, run.cfg.profile, run.moll, k++));
  }
  return run;
}

// Exploratory *mode* is not by itself an unmet hypothesis; only recorded
// violations (gaps, normalization, fallback rungs) demote a run.
bool schedule_hypotheses_unmet(const BuiltRun& run) {
  if (run.cfg.schedule_variant == "slow") return !run.slow.unmet_hypotheses.empty();
  return !run.fast.unmet_hypotheses.empty();
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

int cmd_construct(const RunConfig& cfg0, const fs::path& out) {
  BuiltRun run = build_run(cfg0);
  const RunConfig& cfg = run.cfg;
  fs::create_directories(out);

  nlohmann::json sched = cfg.schedule_variant == "slow" ? to_json(run.slow) : to_json(run.fast);
  sched["config_hash"] = hash_hex(cfg.hash);
  write_text(out / "schedule.json", sched.dump(2) + "\n");

  DecayEnvelope env{&cfg.profile, &cfg.chi, &cfg.omega};
  nlohmann::json meta;
  meta["config_hash"] = hash_hex(cfg.hash);
  meta["variant"] = cfg.schedule_variant;
  meta["config"] = cfg.raw;
  meta["tool"] = "muhat 0.1.0";
  nlohmann::json stage_meta = nlohmann::json::array();

  const std::string hyp = schedule_hypotheses_unmet(run) ? "exploratory" : "strict";
  if (cfg.schedule_variant == "slow") {
    const std::int64_t S = cfg.sweep.S;
    const int K = static_cast<int>(run.factors.size());
    // Stage j table reaches S plus one factor-lattice radius per later stage,
    // so every convolution finds its partner values inside the table.
    std::vector<SpectralAccumulator> accs;
    accs.push_back(
        accumulate_factor(run.factors[0], S + cfg.sweep.radius_max * (K - 1)));
    accs.back().hypothesis_status = hyp;
    for (int j = 2; j <= K; ++j) {
      const std::int64_t target = S + cfg.sweep.radius_max * (K - j);
      accs.push_back(convolve_stage(accs.back(), run.factors[static_cast<std::size_t>(j - 1)],
                                    target, cfg.sweep.eps, cfg.sweep.radius_max));
      if (hyp == "exploratory") accs.back().hypothesis_status = "exploratory";
    }
    for (int j = 1; j <= K; ++j) {
      auto& acc = accs[static_cast<std::size_t>(j - 1)];
      acc.config_hash = cfg.hash;
      write_accumulator_binary((out / ("acc_k" + std::to_string(j) + ".bin")).string(), acc);
      write_coeffs_csv((out / ("coeffs_k" + std::to_string(j) + ".csv")).string(), acc, env, S);
      nlohmann::json sm;
      sm["k"] = j;
      sm["radius"] = acc.radius;
      sm["trunc_err"] = acc.trunc_err;
      sm["eps"] = acc.eps;
      sm["eps_met"] = acc.eps_met;
      sm["radius_G"] = acc.radius_G;
      sm["stage_diff_proxy"] = acc.stage_diff_proxy;
      sm["hypothesis_status"] = acc.hypothesis_status;
      stage_meta.push_back(sm);
    }
  } else {
    // Fast variant: stage-1 table is cheap; deeper stages are evaluated
    // sparsely straight from the schedule, and their sampled coefficients
    // are emitted as CSV.
    const std::int64_t S1 = std::min<std::int64_t>(cfg.sweep.S, 1 << 17);
    auto acc1 = accumulate_factor(run.factors[0], S1);
    acc1.hypothesis_status = hyp;
    acc1.config_hash = cfg.hash;
    write_accumulator_binary((out / "acc_k1.bin").string(), acc1);
    write_coeffs_csv((out / "coeffs_k1.csv").string(), acc1, env, S1);
    nlohmann::json sm;
    sm["k"] = 1;
    sm["radius"] = acc1.radius;
    sm["trunc_err"] = 0.0;
    sm["hypothesis_status"] = hyp;
    stage_meta.push_back(sm);
    const int K = static_cast<int>(run.factors.size());
    if (K >= 2) {
      FastMuSweep sweep;
      sweep.stages = run.factors;
      sweep.S = cfg.sweep.S;
      const auto cand = fast_sweep_candidates(sweep);
      const fs::path p = out / ("samples_k" + std::to_string(K) + ".csv");
      std::FILE* fp = std::fopen(p.string().c_str(), "wb");
      if (!fp) throw std::runtime_error("cannot open " + p.string());
      std::fprintf(fp, "s,re,im,abs\n");
      for (std::int64_t s : cand) {
        if (s > cfg.sweep.S) continue;
        const auto v = mu_hat_fast_eval(run.factors, s);
        std::fprintf(fp, "%lld,%s,%s,%s\n", static_cast<long long>(s),
                     format_double(v.real()).c_str(), format_double(v.imag()).c_str(),
                     format_double(std::abs(v)).c_str());
      }
      std::fclose(fp);
      nlohmann::json sm2;
      sm2["k"] = K;
      sm2["sampled"] = true;
      sm2["hypothesis_status"] = hyp;
      stage_meta.push_back(sm2);
    }
  }
  meta["stages"] = stage_meta;
  write_text(out / "meta.json", meta.dump(2) + "\n");
  return 0;
}

int report_exit(const std::vector<Report>& reports) {
  bool fail = false, unmet = false;
  for (const auto& r : reports) {
    fail = fail || r.any_failed();
    unmet = unmet || r.any_hypothesis_unmet() || r.hypothesis_status == "exploratory";
  }
  if (fail) return 1;
  if (unmet) return 3;
  return 0;
}

int cmd_verify(const RunConfig& cfg0, const fs::path& out, const std::string& suite) {
  BuiltRun run = rebuild_from_artifacts(cfg0, out);
  const RunConfig& cfg = run.cfg;
  {
    std::ifstream in(out / "meta.json");
    if (!in) throw std::runtime_error("missing artifact: meta.json (run construct first)");
    nlohmann::json meta;
    in >> meta;
    if (meta.at("config_hash") != hash_hex(cfg.hash))
      throw std::runtime_error("config hash mismatch: artifacts were built from " +
                               meta.at("config_hash").get<std::string>() + ", config is " +
                               hash_hex(cfg.hash));
  }
  DecayEnvelope env{&cfg.profile, &cfg.chi, &cfg.omega};
  const int K = static_cast<int>(run.factors.size());

  std::vector<SpectralAccumulator> accs;
  if (cfg.schedule_variant == "slow") {
    for (int j = 1; j <= K; ++j) {
      const fs::path p = out / ("acc_k" + std::to_string(j) + ".bin");
      if (!fs::exists(p)) throw std::runtime_error("missing artifact: " + p.string());
      accs.push_back(read_accumulator_binary(p.string()));
      if (accs.back().config_hash != cfg.hash)
        throw std::runtime_error("mixed-hash artifact refused: " + p.string());
    }
  } else {
    accs.push_back(read_accumulator_binary((out / "acc_k1.bin").string()));
    if (accs.back().config_hash != cfg.hash)
      throw std::runtime_error("mixed-hash artifact refused: acc_k1.bin");
  }

  std::vector<Report> reports;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };

  if (want("structural")) {
    reports.push_back(
        check_structural_conditions(cfg.profile, cfg.chi, cfg.omega, SampleSpec{}));
  }

  if (want("single-factor")) {
    for (int j = 0; j < K; ++j) {
      const auto& f = run.factors[static_cast<std::size_t>(j)];
      const std::int64_t M = f.first_scale();
      if (4 * M > (std::int64_t(1) << 20)) {
        Report r;
        r.check_id = "single_factor";
        r.parameter_echo = {{"stage", j + 1}, {"M", M}};
        r.add("table_sweep", CheckStatus::skipped).note =
            "stage scale exceeds the dense-sweep budget";
        reports.push_back(std::move(r));
        continue;
      }
      // Reach the stabilization scale when the budget allows.
      std::int64_t S = std::max<std::int64_t>(cfg.sweep.S, 4 * M);
      S = std::max(S, std::min<std::int64_t>(64 * M * M * M, std::int64_t(1) << 17));
      reports.push_back(check_single_factor(f, std::min<std::int64_t>(S, 1 << 20), env,
                                            schedule_hypotheses_unmet(run)));
    }
  }

  if (want("stability")) {
    // Impulse fixture: exact convolution identity.
    {
      const std::int64_t S = std::min<std::int64_t>(accs[0].radius, 4096);
      auto impulse = unit_impulse(5 * S);
      auto HG = convolve_stage(impulse, run.factors[0], S, cfg.sweep.eps, 4 * S);
      SpectralAccumulator Href = accumulate_factor(run.factors[0], S);
      // Compare HG against the factor table directly.
      StabilityInput in;
      in.H = &Href;
      in.G = nullptr;
      in.N1 = 1;
      in.N2 = 4.0 * static_cast<double>(S);  // the fixture compares the whole table
      in.N3 = 1;
      in.sigma = cfg.profile.sigma;
      Report rep = check_stability(in, HG, env, false);
      rep.check_id += "_impulse_fixture";
      reports.push_back(std::move(rep));
    }
    if (cfg.schedule_variant == "slow" && K >= 2) {
      const auto& b1 = run.slow.blocks[0];
      const auto& b2 = run.slow.blocks[1];
      StabilityInput in;
      in.H = &accs[0];
      in.G = &run.factors[1];
      in.N1 = std::exp(-2.0 * cfg.profile.log_psi(std::log(static_cast<double>(b1.beta))));
      in.N2 = static_cast<double>(b2.M);
      in.N3 = std::exp(-2.0 * cfg.profile.log_psi(std::log(static_cast<double>(b2.beta))));
      in.sigma = cfg.profile.sigma;
      reports.push_back(check_stability(in, accs[1], env, false));
    }
  }

  if (want("mu")) {
    const std::int64_t M1 = run.factors[0].first_scale();
    const std::int64_t stab = 64 * M1 * M1 * M1;
    if (cfg.schedule_variant == "slow") {
      for (const auto& acc : accs)
        reports.push_back(check_mu_estimates(acc, env, cfg.sweep.S, stab));
    } else {
      reports.push_back(check_mu_estimates(accs[0], env, accs[0].radius, stab));
      for (int k = 1; k <= K; ++k) {
        FastMuSweep sweep;
        sweep.stages.assign(run.factors.begin(), run.factors.begin() + k);
        sweep.S = k == K ? cfg.sweep.S
                         : std::max<std::int64_t>(4 * run.factors[static_cast<std::size_t>(k - 1)]
                                                          .rungs.back(),
                                                  1 << 16);
        reports.push_back(check_mu_estimates_fast(sweep));
      }
    }
  }

  if (want("cauchy")) {
    if (cfg.schedule_variant == "slow") {
      std::vector<const SpectralAccumulator*> ps;
      std::vector<std::int64_t> Ms;
      std::vector<double> proxies;
      for (int j = 0; j < K; ++j) {
        ps.push_back(&accs[static_cast<std::size_t>(j)]);
        Ms.push_back(run.slow.blocks[static_cast<std::size_t>(j)].M);
        proxies.push_back(accs[static_cast<std::size_t>(j)].stage_diff_proxy);
      }
      reports.push_back(check_cauchy(ps, Ms, proxies));
    } else if (K >= 2) {
      // Sparse evaluation near zero; the proxy is the term-sum bound.
      Report rep;
      rep.check_id = "cauchy_fast";
      rep.hypothesis_status = schedule_hypotheses_unmet(run) ? "exploratory" : "strict";
      const std::int64_t lim = std::max<std::int64_t>(1, run.factors[0].first_scale() / 4 - 1);
      double worst = 0.0;
      for (std::int64_t s = -lim; s <= lim; ++s) {
        const auto d = mu_hat_fast_eval(run.factors, s) - g_hat(run.factors[0], s);
        worst = std::max(worst, std::abs(d));
      }
      double proxy = convolution_tail_bound(
          run.factors[1],
          [&](double u) { return std::min(1.0, g_hat_upper_bound(run.factors[0], u)); },
          run.factors[1].first_scale() - 1, lim);
      auto& e = rep.add("pair_1_2", worst <= proxy + 1e-15 ? CheckStatus::pass
                                                           : CheckStatus::fail);
      e.values["max_abs_difference"] = worst;
      e.values["proxy"] = proxy;
      reports.push_back(std::move(rep));
    }
  }

  if (want("kahane")) {
    const auto& f = run.factors[0];
    const auto& psis = f.variant == FactorVariant::slow ? f.psi_q : f.psi_rung;
    double min_psi = 1e300;
    for (double v : psis) min_psi = std::min(min_psi, v);
    const double n = std::pow(2.0, cfg.sweep.grid_log2_n);
    if (min_psi * n < 16.0) {
      Report r;
      r.check_id = "kahane_extension";
      r.add("grid", CheckStatus::skipped).note = "resolution refusal at this schedule scale";
      reports.push_back(std::move(r));
    } else {
      const auto samples = g_grid(f, cfg.sweep.grid_log2_n);
      double c_int = 0.0;
      const std::int64_t S = std::min<std::int64_t>(accs[0].radius, 4096);
      for (std::int64_t s = 1; s <= S; ++s) {
        const double a = std::abs(accs[0].at(s));
        if (a > 0)
          c_int = std::max(c_int, std::exp(std::log(a) - env.log_value(static_cast<double>(s))));
      }
      std::vector<double> xis;
      for (int i = 0; i < 64; ++i)
        xis.push_back(1.5 + static_cast<double>(S - 2) * i / 63.0 + 0.5 / (i + 2.0));
      reports.push_back(kahane_extension(
          samples, [&](std::int64_t s) { return accs[0].at(s); }, env, xis, c_int));
    }
  }

  if (want("cover")) {
    if (!cfg.alpha) {
      Report r;
      r.check_id = "cover";
      r.add("alpha", CheckStatus::skipped).note = "no alpha block in the configuration";
      reports.push_back(std::move(r));
    } else if (cfg.schedule_variant != "slow") {
      Report r;
      r.check_id = "cover";
      r.add("variant", CheckStatus::skipped).note = "cover suite applies to block schedules";
      reports.push_back(std::move(r));
    } else {
      Report r;
      r.check_id = "cover";
      for (int k = 1; k <= K; ++k) {
        const auto cov = build_cover(run.factors, k, *cfg.alpha, cfg.profile);
        const bool ok = cov.ratio_ok && cov.counting_bound_violations == 0;
        auto& e = r.add("cover_k" + std::to_string(k), ok ? CheckStatus::pass
                                                          : CheckStatus::fail);
        e.values["cover_sum"] = cov.cover_sum;
        e.values["cardinality"] = static_cast<double>(cov.cover_cardinality);
        e.values["pairs"] = static_cast<double>(cov.pairs);
        e.values["pairs_ratio_checked"] = static_cast<double>(cov.pairs_ratio_checked);
        e.values["worst_ratio_low"] = cov.worst_ratio_low;
        e.values["worst_ratio_high"] = cov.worst_ratio_high;
        e.values["counting_bound_violations"] =
            static_cast<double>(cov.counting_bound_violations);
      }
      reports.push_back(std::move(r));
      reports.push_back(cover_sum_trend(run.factors, *cfg.alpha, cfg.profile, K));
      Report rs;
      rs.check_id = "block_reciprocal_sum";
      const auto s100 = block_reciprocal_sum(100, 2.0);
      const auto s1000 = block_reciprocal_sum(1000, 2.0);
      auto& e1 = rs.add("M_100_gamma_2", CheckStatus::recorded);
      e1.values["sum"] = s100.sum;
      e1.values["deviation_from_log_gamma"] = s100.deviation;
      auto& e2 = rs.add("M_1000_gamma_2", CheckStatus::recorded);
      e2.values["sum"] = s1000.sum;
      e2.values["deviation_from_log_gamma"] = s1000.deviation;
      rs.add("deviation_shrinks", s1000.deviation < s100.deviation ? CheckStatus::pass
                                                                   : CheckStatus::fail);
      reports.push_back(std::move(rs));
    }
  }

  // Fitted constants are recorded as baselines on first sight and
  // regression-checked thereafter.
  if (cfg.baseline_path) {
    BaselineStore store(*cfg.baseline_path);
    Report reg;
    reg.check_id = "baseline_regression";
    reg.parameter_echo = {{"store", *cfg.baseline_path}, {"rel_tol", 0.05}};
    static const char* kTracked[] = {"C1", "C2", "fitted_constant", "max_abs_times_nk",
                                     "max_abs_times_sqrt_nk", "constant_vs_sqrt_delta"};
    for (const auto& r : reports) {
      for (const auto& e : r.entries) {
        for (const char* key : kTracked) {
          auto it = e.values.find(key);
          if (it == e.values.end()) continue;
          const std::string bkey =
              hash_hex(cfg.hash) + "/" + r.check_id + "/" + e.name + "/" + key;
          const auto stored = store.check_or_record(bkey, it->second);
          auto& re = reg.add(r.check_id + "/" + e.name + "/" + key,
                             CheckStatus::recorded);
          re.values["value"] = it->second;
          if (stored) {
            const double rel =
                std::fabs(it->second - *stored) / std::max(1e-300, std::fabs(*stored));
            re.values["baseline"] = *stored;
            re.values["rel_change"] = rel;
            re.status = rel <= 0.05 ? CheckStatus::pass : CheckStatus::fail;
          }
        }
      }
    }
    store.save();
    reports.push_back(std::move(reg));
  }

  // Emit reports.
  fs::create_directories(out / "reports");
  nlohmann::json all = nlohmann::json::array();
  std::string text;
  for (const auto& r : reports) {
    all.push_back(r.to_json());
    text += r.to_text();
  }
  write_text(out / "reports" / (suite + ".json"), all.dump(2) + "\n");
  write_text(out / "reports" / (suite + ".txt"), text);
  std::cout << text;
  return report_exit(reports);
}

int cmd_plotdata(const RunConfig& cfg0, const fs::path& out, std::int64_t smax,
                 std::int64_t thin) {
  BuiltRun run = rebuild_from_artifacts(cfg0, out);
  const RunConfig& cfg = run.cfg;
  DecayEnvelope env{&cfg.profile, &cfg.chi, &cfg.omega};
  const int K = cfg.schedule_variant == "slow" ? static_cast<int>(run.factors.size()) : 1;
  const fs::path accp = out / ("acc_k" + std::to_string(K) + ".bin");
  if (!fs::exists(accp)) throw std::runtime_error("missing artifact: " + accp.string());
  const auto acc = read_accumulator_binary(accp.string());
  if (acc.config_hash != cfg.hash)
    throw std::runtime_error("mixed-hash artifact refused: " + accp.string());

  const std::int64_t S = std::min(smax > 0 ? smax : acc.radius, acc.radius);
  std::vector<std::int64_t> ss;
  ss.push_back(0);
  if (thin > 0) {
    for (std::int64_t i = 0; i < thin; ++i) {
      const double ls = std::log(1.0) + (std::log(static_cast<double>(S)) * i) /
                                            std::max<std::int64_t>(1, thin - 1);
      const auto s = static_cast<std::int64_t>(std::llround(std::exp(ls)));
      ss.push_back(std::min(s, S));
    }
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  } else {
    for (std::int64_t s = 1; s <= S; ++s) ss.push_back(s);
  }
  const fs::path p = out / ("plot_mu_k" + std::to_string(K) + ".csv");
  std::FILE* fp = std::fopen(p.string().c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open " + p.string());
  std::fprintf(fp, "s,abs,envelope,ratio\n");
  for (std::int64_t s : ss) {
    const double a = std::abs(acc.at(s));
    if (s == 0) {
      std::fprintf(fp, "0,%s,,\n", format_double(a).c_str());
    } else {
      const double e = env.value(static_cast<double>(s));
      std::fprintf(fp, "%lld,%s,%s,%s\n", static_cast<long long>(s), format_double(a).c_str(),
                   format_double(e).c_str(), format_double(a / e).c_str());
    }
  }
  std::fclose(fp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit measures on well-approximable numbers: construct & verify"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all";
  std::int64_t smax = 0, thin = 0;
  double eps_override = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "artifact directory")->required();
  };
  auto* c = app.add_subcommand("construct", "build schedule + accumulators");
  add_common(c);
  c->add_option("--smax", smax, "override sweep.S");
  c->add_option("--eps", eps_override, "override sweep.eps");
  auto* v = app.add_subcommand("verify", "run verification suites over artifacts");
  add_common(v);
  v->add_option("--suite", suite,
                "structural | single-factor | stability | mu | cauchy | kahane | cover | all");
  auto* p = app.add_subcommand("plotdata", "emit decay-curve CSV from artifacts");
  add_common(p);
  p->add_option("--smax", smax, "upper frequency");
  p->add_option("--thin", thin, "log-spaced row count (0 = all rows)");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (smax > 0 && c->parsed()) cfg.sweep.S = smax;
    if (eps_override > 0 && c->parsed()) cfg.sweep.eps = eps_override;
    if (c->parsed()) return cmd_construct(cfg, out_dir);
    if (v->parsed()) return cmd_verify(cfg, out_dir, suite);
    return cmd_plotdata(cfg, out_dir, smax, thin);
  } catch (const StrictRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

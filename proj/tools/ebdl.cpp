#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ebdl/harvest/rates.hpp"
#include "ebdl/solve/solver.hpp"

using namespace ebdl;
namespace fs = std::filesystem;

namespace {

enum Exit { Ok = 0, Config = 2, StageMissing = 3, VerifyFailed = 4, SearchFailed = 5 };

struct StageMissingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  u32 p = 5, m0 = 1;
  u64 k = 9, seed = 0;
  int D = 3;
  int base_height = 3, extended_height = 5;
  u64 budget = 0;
  int workers = 0;
  u64 threshold = 1ull << 20;
  int ta = 2, tb = 1, d0 = 5;
  u64 descent_budget = 0;
  std::string dir = ".";

  std::string path(const std::string& name) const { return (fs::path(dir) / name).string(); }
  int worker_count() const { return workers > 0 ? workers : default_workers(); }
  SolveOptions solve_options(u64 basis_seed) const {
    SolveOptions o;
    o.small_prime_threshold = threshold;
    o.seed = basis_seed;
    o.split_degree = d0;
    o.ta = ta;
    o.tb = tb;
    o.descent_budget = descent_budget;
    return o;
  }
};

std::string need(const RunConfig& cfg, const std::string& name, const std::string& producer) {
  std::string p = cfg.path(name);
  if (!fs::exists(p)) throw StageMissingError(p + " not found; run `ebdl " + producer + "` first");
  return p;
}

EllipticBasis load_stage_basis(const RunConfig& cfg) { return load_basis(need(cfg, "basis.json", "basis")); }

void print_stats(const std::string& id, const SieveStats& S) {
  std::cout << id << ": pairs " << S.pairs << ", degenerate " << S.degenerate << ", smooth " << S.smooth << " (rate "
            << S.success_rate() << "), emitted " << S.emitted << ", max left " << S.max_left << ", max right " << S.max_right
            << ", bound violations " << S.left_over_bound + S.right_over_bound + S.compelled_missing << "\n";
}

// Appends rows not already present; returns how many were new.
size_t append_new(const std::string& path, const std::vector<Relation>& fresh) {
  std::vector<Relation> old;
  if (fs::exists(path)) old = load_relations(path);
  std::set<std::pair<std::vector<std::pair<u32, u64>>, u64>> seen;
  for (auto& r : old) seen.insert({r.row, r.c});
  std::vector<Relation> add;
  for (auto& r : dedup_relations(fresh))
    if (seen.insert({r.row, r.c}).second) add.push_back(r);
  save_relations(add, path, true);
  return add.size();
}

int cmd_search(const RunConfig& cfg) {
  auto s = search_curve(cfg.p, cfg.m0, cfg.k, cfg.seed);
  TorsionData td = make_torsion(s.curve, s.P1, cfg.k);
  std::cout << encode_curve(s.curve, td) << "\n";
  std::cout << "mu = " << s.mu << " (bound " << mu_bound(s.curve.q(), cfg.k) << "), tried " << s.tried << "\n";
  return Ok;
}

int cmd_basis(const RunConfig& cfg) {
  auto s = search_curve(cfg.p, cfg.m0, cfg.k, cfg.seed);
  auto B = build_basis(s.curve, s.P1, cfg.k, cfg.seed, cfg.D, s.mu);
  fs::create_directories(cfg.dir);
  save_basis(B, cfg.path("basis.json"));
  std::cout << "curve " << encode_curve(B.curve, B.td) << "\n";
  std::cout << "I = " << B.L().modulus().c.size() - 1 << "-degree factor, M = " << B.M << ", factors";
  for (auto& [l, e] : factor_modulus(B.M)) std::cout << " " << l << "^" << e;
  std::cout << "\nwrote " << cfg.path("basis.json") << "\n";
  return Ok;
}

int cmd_harvest(const RunConfig& cfg) {
  auto B = load_stage_basis(cfg);
  FactorBase fb(B, cfg.extended_height);
  Model m(B.curve, B.td);
  auto t0 = std::chrono::steady_clock::now();
  auto r = run_sieve(B, fb, core_sieve(m), cfg.budget, cfg.worker_count());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_stats("core", r.stats);
  std::cout << "success rate " << r.stats.success_rate() << " vs large-q limit " << limiting_rate(6) << "\n";
  size_t unknowns = fb.count_up_to(cfg.base_height);
  size_t added = append_new(cfg.path("relations.txt"), r.relations);
  std::cout << "factor base reps (height <= " << cfg.base_height << "): " << unknowns << ", new rows " << added << " in "
            << secs << " s\n";
  return Ok;
}

int cmd_extend(const RunConfig& cfg) {
  auto B = load_stage_basis(cfg);
  need(cfg, "relations.txt", "harvest");
  FactorBase fb(B, cfg.extended_height);
  Model m(B.curve, B.td);
  std::vector<Relation> all;
  auto run = [&](const SieveBasis& s) {
    auto r = run_sieve(B, fb, s, cfg.budget, cfg.worker_count());
    print_stats(s.id, r.stats);
    all.insert(all.end(), r.relations.begin(), r.relations.end());
  };
  run(special_sieve(m));
  auto c = k1k2_constants(m);
  std::cout << "c_<U,UV> = " << c[0] << ", c_<UV,V> = " << c[1] << ", c_<U,V> = " << c[2] << "\n";
  for (auto [k1, k2] : k1k2_pairs(m)) run(k1k2_sieve(m, k1, k2));
  if (cfg.extended_height >= 5) run(height5_sieve(m));
  size_t added = append_new(cfg.path("relations.txt"), all);
  std::cout << "reps of height 4: " << fb.count_up_to(4) - fb.count_up_to(3) << ", height 5: "
            << fb.count_up_to(5) - fb.count_up_to(4) << ", new rows " << added << "\n";
  return Ok;
}

ExtElem parse_element(const Ext& L, const std::string& s) {
  if (s.find('/') != std::string::npos) return L.decode(s);
  return L.from_index(std::stoull(s, nullptr, 16));
}

int cmd_solve(const RunConfig& cfg, const std::string& gen) {
  auto B = load_stage_basis(cfg);
  auto rels = load_relations(need(cfg, "relations.txt", "harvest"));
  FactorBase fb(B, cfg.extended_height);
  ExtElem g = gen.empty() ? primitive_element(B.L()) : parse_element(B.L(), gen);
  SolveReport rep;
  auto T = solve_logs(B, fb, rels, g, cfg.solve_options(B.seed), &rep);
  for (auto& p : rep.parts)
    std::cout << "mod " << p.mod << (p.bsgs ? " bsgs" : " linalg") << ": rows " << p.rows << ", core unknowns "
              << p.core_unknowns << ", core kernel dim " << p.core_kernel_dim << ", solved " << p.solved << ", rejected "
              << p.rejected << "\n";
  std::cout << "complete logs: " << rep.complete << " / " << rep.reps << "\n";
  save_logs(T, B, fb, cfg.path("logs.txt"));
  std::cout << "wrote " << cfg.path("logs.txt") << "\n";
  return Ok;
}

int cmd_dlog(const RunConfig& cfg, const std::string& target, std::optional<u64> planted) {
  auto B = load_stage_basis(cfg);
  FactorBase fb(B, cfg.extended_height);
  auto T = load_logs(B, fb, need(cfg, "logs.txt", "solve"));
  const Ext& L = B.L();
  ExtElem z;
  if (planted)
    z = L.pow(T.g, *planted);
  else if (!target.empty())
    z = parse_element(L, target);
  else
    throw CLI::ValidationError("dlog needs --target or --planted");
  auto r = dlog(B, fb, T, z, cfg.solve_options(B.seed));
  std::cout << "target " << L.encode(z) << "\n";
  std::cout << "x = " << r.x << " mod " << B.M << "\n";
  if (r.full) std::cout << "full log = " << *r.full << " mod " << static_cast<u64>(L.order() - 1) << "\n";
  if (!r.verified || !r.full) {
    std::cout << "FAILED: z / g^x is not in F_q^*\n";
    return VerifyFailed;
  }
  std::cout << "g^" << *r.full << " = z: VERIFIED\n";
  if (planted && (*planted % B.M) != r.x) {
    std::cout << "FAILED: planted exponent differs mod M\n";
    return VerifyFailed;
  }
  return Ok;
}

int cmd_verify(const RunConfig& cfg, u64 sample) {
  auto B = load_stage_basis(cfg);
  auto rels = load_relations(need(cfg, "relations.txt", "harvest"));
  FactorBase fb(B, cfg.extended_height);
  PsiEvaluator ev(B);
  Rng rng(B.seed);
  u64 rel_ok = 0, rel_n = std::min<u64>(sample, rels.size());
  std::vector<size_t> idx(rels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (u64 i = 0; i < rel_n; ++i) rel_ok += verify_row(ev, fb, rels[idx[i]]);
  std::cout << "relations: " << rel_ok << " / " << rel_n << " pass the Psi check\n";
  bool ok = rel_ok == rel_n;
  if (fs::exists(cfg.path("logs.txt"))) {
    auto T = load_logs(B, fb, cfg.path("logs.txt"));
    auto fac = factor_modulus(B.M);
    std::vector<u32> have;
    for (u32 i = 0; i < fb.size(); ++i)
      if (T.rep_log(i)) have.push_back(i);
    std::shuffle(have.begin(), have.end(), rng);
    u64 n = std::min<u64>(sample, have.size()), good = 0;
    for (u64 i = 0; i < n; ++i) {
      auto o = quotient_log(B.L(), B.q(), B.M, fac, T.g, ev.elementary(fb.reps()[have[i]]).v);
      good += o && *o == *T.rep_log(have[i]);
    }
    std::cout << "logs: " << good << " / " << n << " agree with BSGS\n";
    ok = ok && good == n;
  }
  return ok ? Ok : VerifyFailed;
}

int cmd_stats(u64 q, int degree, u64 samples, int bound, u64 seed) {
  auto fac = factor_u64(q);
  if (fac.size() != 1) throw CLI::ValidationError("--q must be a prime power");
  FqPtr f = field_make(static_cast<u32>(fac[0].first), static_cast<u32>(fac[0].second), 0);
  std::vector<int> degrees = degree ? std::vector<int>{degree} : std::vector<int>{4, 6, 7, 8};
  for (int d : degrees) {
    double r = splitting_rate(*f, d, bound, samples, seed);
    std::cout << "degree " << d << " into <= " << bound << " over F_" << q << ": " << r;
    if (bound == 3 && limiting_rate(d) > 0) std::cout << " (large-q limit " << limiting_rate(d) << ")";
    std::cout << "\n";
  }
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete logarithms in F_{q^k} through an elliptic representation"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--dir", cfg.dir, "Artifact directory")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads (EBDL_WORKERS overrides the default)");

  auto add_field = [&](CLI::App* c) {
    c->add_option("--p", cfg.p, "Characteristic")->capture_default_str();
    c->add_option("--m0", cfg.m0, "Degree of F_{p^m0} before curve search")->capture_default_str();
    c->add_option("--k", cfg.k, "Extension degree")->capture_default_str();
    c->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  };
  auto add_heights = [&](CLI::App* c) {
    c->add_option("--extended-height", cfg.extended_height, "Largest orbit degree kept in the factor base")
        ->capture_default_str()
        ->check(CLI::Range(3, 5));
    c->add_option("--budget", cfg.budget, "Sieve pairs per mode (0 = all)");
  };
  auto add_solve = [&](CLI::App* c) {
    c->add_option("--threshold", cfg.threshold, "Primes of M below this are solved by BSGS")->capture_default_str();
    c->add_option("--d0", cfg.d0, "Largest factor degree in classical splits")->capture_default_str();
    c->add_option("--ta", cfg.ta, "Bilinear descent t_a")->capture_default_str();
    c->add_option("--tb", cfg.tb, "Bilinear descent t_b")->capture_default_str();
    c->add_option("--descent-budget", cfg.descent_budget, "Bilinear descent attempts per place (0 disables)");
  };

  auto* search = app.add_subcommand("search", "Find a curve with a point of order k");
  add_field(search);
  auto* basis = app.add_subcommand("basis", "Build the elliptic basis and write basis.json");
  add_field(basis);
  basis->add_option("--D", cfg.D, "Largest degree in the N_d table")->capture_default_str();
  auto* harvest = app.add_subcommand("harvest", "Core sieve into relations.txt");
  add_heights(harvest);
  auto* extend = app.add_subcommand("extend", "Group and height-5 sieves appended to relations.txt");
  add_heights(extend);
  auto* solve = app.add_subcommand("solve", "Linear algebra and BSGS parts into logs.txt");
  add_solve(solve);
  std::string gen;
  solve->add_option("--g", gen, "Generator (hex index or '/'-separated coordinates); default: first primitive element");
  auto* dl = app.add_subcommand("dlog", "Logarithm of one target");
  add_solve(dl);
  std::string target;
  std::optional<u64> planted;
  dl->add_option("--target", target, "Target as a hex index or '/'-separated coordinates");
  dl->add_option("--planted", planted, "Use g^x as the target");
  auto* verify = app.add_subcommand("verify", "Re-check sampled relations and logs");
  u64 sample = 100;
  verify->add_option("--sample", sample, "Sample size")->capture_default_str();
  auto* stats = app.add_subcommand("stats", "Polynomial splitting rates");
  u64 sq = 121, samples = 100000, sseed = 1;
  int degree = 0, bound = 3;
  stats->add_option("--q", sq, "Field size")->capture_default_str();
  stats->add_option("--degree", degree, "Polynomial degree (0 = 4, 6, 7, 8)");
  stats->add_option("--samples", samples, "Samples")->capture_default_str();
  stats->add_option("--bound", bound, "Smoothness bound")->capture_default_str();
  stats->add_option("--seed", sseed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? Ok : Config;
  }
  try {
    if (*search) return cmd_search(cfg);
    if (*basis) return cmd_basis(cfg);
    if (*harvest) return cmd_harvest(cfg);
    if (*extend) return cmd_extend(cfg);
    if (*solve) return cmd_solve(cfg, gen);
    if (*dl) return cmd_dlog(cfg, target, planted);
    if (*verify) return cmd_verify(cfg, sample);
    if (*stats) return cmd_stats(sq, degree, samples, bound, sseed);
  } catch (const StageMissingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return StageMissing;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Config;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::SearchExhausted: return SearchFailed;
      case Errc::DescentFailed:
      case Errc::NotInSubgroup:
      case Errc::InconsistentSystem: return VerifyFailed;
      default: return Config;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Config;
  }
  return Config;
}

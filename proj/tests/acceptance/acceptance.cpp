// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "bfgsadmm/bfgs.hpp"
#include "bfgsadmm/centralized.hpp"
#include "bfgsadmm/data.hpp"
#include "bfgsadmm/diagnostics.hpp"
#include "bfgsadmm/error.hpp"
#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/reference_admm.hpp"
#include "bfgsadmm/run.hpp"
#include "bfgsadmm/solver.hpp"
#include "bfgsadmm/synthetic.hpp"
#include "support.hpp"

using namespace bfgsadmm;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects the first failure message; later ones are dropped.
class Checker {
 public:
  void require(bool ok, const std::string& msg) {
    if (!ok && pass_) {
      pass_ = false;
      msg_ = msg;
    }
  }
  Verdict done(const std::string& summary) const { return {pass_, pass_ ? summary : msg_}; }
  bool ok() const { return pass_; }

 private:
  bool pass_ = true;
  std::string msg_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Problem random_quadratic_problem(support::Gen& gen, int m, int d, double gamma) {
  std::vector<std::shared_ptr<const SmoothLocalCost>> costs;
  for (int i = 0; i < m; ++i) costs.push_back(quadratic_cost(gen.spd(d, 0.5, 5.0), gen.vector(d)));
  std::shared_ptr<const Regularizer> reg;
  if (gamma > 0.0) reg = l1_regularizer(gamma);
  return Problem(std::move(costs), reg);
}

Problem random_logistic_problem(support::Gen& gen, int m, int d, int per_agent, double gamma) {
  const auto samples = random_logistic_samples(static_cast<std::size_t>(m * per_agent), d, gen.seed());
  std::vector<std::vector<LabeledSample>> parts(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < samples.size(); ++k) parts[k % parts.size()].push_back(samples[k]);
  return logistic_problem(parts, gamma);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// --- criteria -------------------------------------------------------------

Verdict graph_identities() {
  support::Gen gen(101);
  Checker check;
  for (int trial = 0; trial < 200 && check.ok(); ++trial) {
    const int m = gen.integer(2, 50);
    const Topology t = gen.graph(m, gen.uniform(0.0, 0.5));
    const GraphMatrices g = matrices(t);
    const std::string where = " (graph " + std::to_string(trial) + ", m=" + std::to_string(m) + ")";
    check.require(g.e_s == g.a_s - g.a_d, "E_s != A_s - A_d" + where);
    check.require(g.e_u == g.a_s + g.a_d, "E_u != A_s + A_d" + where);
    check.require(Eigen::MatrixXd(g.e_s.transpose() * g.e_s) == g.l_s, "L_s != E_s^T E_s" + where);
    check.require(Eigen::MatrixXd(g.e_u.transpose() * g.e_u) == g.l_u, "L_u != E_u^T E_u" + where);
    check.require(Eigen::MatrixXd(0.5 * (g.l_s + g.l_u)) == g.delta, "Delta != (L_s + L_u)/2" + where);
    check.require(Eigen::MatrixXd(g.a_s.transpose() * g.a_s + g.a_d.transpose() * g.a_d) == g.delta,
                  "Delta != A_s^T A_s + A_d^T A_d" + where);
    for (int i = 0; i < m; ++i) check.require(g.delta(i, i) == t.degree(i), "degree mismatch" + where);
  }
  return check.done("200 graphs, m <= 50, exact integer equality");
}

Verdict bfgs_secant() {
  support::Gen gen(102);
  Checker check;
  double worst = 0.0;
  int applied = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = gen.integer(1, 10);
    LocalCurvature c{gen.spd(d), 1e6, 1e-12};
    const Eigen::VectorXd s = gen.vector(d);
    const Eigen::VectorXd y = gen.spd(d) * s;
    if (bfgs_inverse_update(c, s, y) != UpdateStatus::kApplied) continue;
    ++applied;
    const double rel = (c.b_inv * y - s).norm() / s.norm();
    worst = std::max(worst, rel);
    check.require(rel <= 1e-10, "secant residual " + sci(rel) + " at triple " + std::to_string(trial));
  }
  check.require(applied == 1000, std::to_string(1000 - applied) + " positive-curvature updates were skipped");
  return check.done(std::to_string(applied) + " updates, worst |B^-1 y - s|/|s| = " + sci(worst));
}

Verdict sherman_morrison_assembly() {
  support::Gen gen(103);
  Checker check;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = gen.integer(1, 20);
    const Eigen::MatrixXd b = gen.spd(d, 0.05, 20.0);
    LocalCurvature c{b.inverse(), 1e6, 1e-12};
    c.b_inv = 0.5 * (c.b_inv + c.b_inv.transpose()).eval();
    const int degree = gen.integer(0, 6);
    const bool designated = gen.integer(0, 1) == 1;
    const double mu1 = gen.uniform(0.2, 5.0), mu2 = gen.uniform(0.2, 5.0), eps = gen.uniform(0.01, 3.0);
    const double shift = hessian_shift(degree, designated, mu1, mu2, eps);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd b_reg = c.regularized_inverse().llt().solve(id);
    const Eigen::MatrixXd direct = (b_reg + shift * id).inverse();
    const Eigen::MatrixXd got = assemble_local_h_inv(c, degree, designated, mu1, mu2, eps);
    const double rel = (got - direct).norm() / direct.norm();
    worst = std::max(worst, rel);
    check.require(rel <= 1e-8, "relative Frobenius error " + sci(rel) + " at d=" + std::to_string(d));
  }
  return check.done("100 cases, d <= 20, worst relative error " + sci(worst));
}

Verdict prox_and_gradients() {
  support::Gen gen(104);
  Checker check;
  double worst_prox = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = gen.uniform(-5.0, 5.0), gamma = gen.uniform(0.0, 2.0), mu = gen.uniform(0.05, 3.0);
    const auto reg = l1_regularizer(gamma);
    const double got = reg->prox(Eigen::VectorXd::Constant(1, v), mu)(0);
    const double err = std::abs(got - support::numeric_scalar_prox(v, gamma, mu));
    worst_prox = std::max(worst_prox, err);
    check.require(err <= 1e-8, "prox mismatch " + sci(err) + " at v=" + sci(v));
  }
  double worst_grad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = gen.integer(1, 8);
    std::vector<LabeledSample> samples;
    const int count = gen.integer(1, 30);
    for (int k = 0; k < count; ++k) samples.push_back({gen.vector(d), gen.integer(0, 1)});
    const std::shared_ptr<const SmoothLocalCost> costs[] = {logistic_cost(samples, gen.uniform(0.1, 1.0)),
                                                            quadratic_cost(gen.spd(d), gen.vector(d))};
    for (const auto& f : costs) {
      const Eigen::VectorXd x = gen.vector(d, 2.0);
      const Eigen::VectorXd g = f->gradient(x);
      const Eigen::VectorXd fd = support::numeric_gradient(*f, x);
      const double rel = (g - fd).norm() / std::max(fd.norm(), 1e-3);
      worst_grad = std::max(worst_grad, rel);
      check.require(rel <= 1e-5, "gradient mismatch " + sci(rel));
    }
  }
  return check.done("prox worst " + sci(worst_prox) + " on 1000 scalars, gradient worst relative " + sci(worst_grad));
}

Verdict reference_equivalence() {
  support::Gen gen(105);
  Checker check;
  double worst = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int m = gen.integer(2, 6), d = gen.integer(1, 4);
    const Problem p = random_quadratic_problem(gen, m, d, trial % 2 ? 0.2 : 0.0);
    const Topology t = gen.graph(m);
    SolverConfig c;
    c.designated = gen.integer(0, m - 1);
    c.mu1 = gen.uniform(0.5, 2.0);
    c.mu2 = gen.uniform(0.5, 2.0);
    c.eps = gen.uniform(0.5, 2.0);
    const ReferenceAdmm ref(p, t, c);
    FullAdmmState full = ref.initial_state();
    SolverState fast = initial_state(p, t, c);
    for (int k = 0; k < 50; ++k) {
      full = ref.step(full);
      fast = bfgs_admm_step(fast, p, t, c);
      double gap = std::max((full.theta - fast.theta).norm(), (full.lambda - fast.lambda).norm());
      for (int i = 0; i < m; ++i) gap = std::max(gap, (ref.block(full.x, i) - fast.x[static_cast<std::size_t>(i)]).norm());
      const double identity = std::max((ref.d().transpose() * full.y).norm(),
                                       (full.z - ref.half_unsigned_incidence(full.x)).norm());
      worst = std::max(worst, gap);
      worst_identity = std::max(worst_identity, identity);
      check.require(gap <= 1e-9, "trajectory gap " + sci(gap) + " at instance " + std::to_string(trial));
      check.require(identity <= 1e-12, "D^T y or z identity residual " + sci(identity));
    }
  }
  return check.done("10 instances x 50 iterations, worst gap " + sci(worst) + ", identities " + sci(worst_identity));
}

Verdict dual_inclusion() {
  support::Gen gen(106);
  Checker check;
  double worst = 0.0;
  std::size_t rows = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const int m = gen.integer(3, 10), d = gen.integer(1, 5);
    const double gamma = gen.uniform(0.01, 0.5);
    const Problem p =
        trial % 2 ? random_logistic_problem(gen, m, d, 20, gamma * 0.1) : random_quadratic_problem(gen, m, d, gamma);
    const Topology t = gen.graph(m);
    for (Method method : {Method::kBfgsAdmm, Method::kFirstOrder}) {
      SolverConfig c;
      c.method = method;
      c.designated = gen.integer(0, m - 1);
      c.eps = method == Method::kFirstOrder ? 6.0 : 1.0;
      c.max_iter = 300;
      c.tol = 0.0;
      const RunResult r = run(p, t, c);
      for (const TraceRecord& row : r.trace.records) {
        worst = std::max(worst, row.kkt_dual);
        check.require(row.kkt_dual <= 1e-9, "dual inclusion residual " + sci(row.kkt_dual) + " at iteration " +
                                                std::to_string(row.iter));
      }
      worst = std::max(worst, r.final_kkt.dual_inclusion);
      rows += r.trace.records.size();
    }
  }
  return check.done(std::to_string(rows) + " iterations over 16 l1 runs, worst " + sci(worst));
}

Verdict dual_column_space() {
  support::Gen gen(107);
  Checker check;
  double worst = 0.0;
  int count = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const int m = gen.integer(2, 10), d = gen.integer(1, 4);
    const Problem p = random_quadratic_problem(gen, m, d, trial % 2 ? 0.1 : 0.0);
    const Topology t = gen.graph(m, 0.5);
    for (Method method : {Method::kBfgsAdmm, Method::kFirstOrder}) {
      SolverConfig c;
      c.method = method;
      c.designated = gen.integer(0, m - 1);
      c.eps = method == Method::kFirstOrder ? 6.0 : 1.0;
      SolverState s = initial_state(p, t, c);
      for (int k = 0; k <= 100; ++k) {
        const double r = dual_column_space_check(s, t, c.designated);
        worst = std::max(worst, r);
        ++count;
        check.require(r <= 1e-8, "column-space residual " + sci(r) + " at iteration " + std::to_string(k));
        s = step(s, p, t, c);
      }
    }
  }
  return check.done(std::to_string(count) + " iterates, worst " + sci(worst));
}

Verdict quadratic_convergence() {
  Checker check;
  double worst_rho = 0.0, worst_x = 0.0;
  std::size_t worst_iters = 0;
  const double conditions[] = {10.0, 30.0, 100.0, 100.0, 100.0};
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 10, d = 5;
    const auto agents = random_quadratic_agents(m, d, conditions[trial], 200 + static_cast<std::uint64_t>(trial));
    const Problem p = quadratic_problem(agents);
    const Topology t = build_random_binomial(m, 0.4, 300 + static_cast<std::uint64_t>(trial));
    Eigen::MatrixXd q_sum = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd b_sum = Eigen::VectorXd::Zero(d);
    for (const auto& a : agents) {
      q_sum += a.q;
      b_sum += a.b;
    }
    const Eigen::VectorXd x_star = q_sum.llt().solve(-b_sum);

    SolverConfig c;
    c.mu1 = c.mu2 = c.eps = 0.5;
    const PrimalDualOptimum opt = primal_dual_optimum(p, t, c.designated, x_star);
    SolverState s = initial_state(p, t, c);
    std::vector<double> dist{scaled_distance_squared(s, opt, t, c)};
    std::size_t iters = 0;
    bool converged = false;
    while (iters < 2000 && !converged) {
      s = bfgs_admm_step(s, p, t, c);
      ++iters;
      dist.push_back(scaled_distance_squared(s, opt, t, c));
      converged = kkt_residuals(s, p, t, c.designated).max() <= 1e-8;
    }
    double x_err = 0.0;
    for (const auto& xi : s.x) x_err = std::max(x_err, (xi - x_star).lpNorm<Eigen::Infinity>());
    const std::vector<double> tail(dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2), dist.end());
    const double rho = fitted_contraction(tail);
    worst_rho = std::max(worst_rho, rho);
    worst_x = std::max(worst_x, x_err);
    worst_iters = std::max(worst_iters, iters);
    const std::string where = " (instance " + std::to_string(trial) + ")";
    check.require(converged, "KKT residuals above 1e-8 after 2000 iterations" + where);
    check.require(x_err <= 1e-6, "distance to closed form " + sci(x_err) + where);
    check.require(rho < 1.0, "fitted contraction " + std::to_string(rho) + where);
  }
  char rho_text[32];
  std::snprintf(rho_text, sizeof rho_text, "%.4f", worst_rho);
  return check.done("5 instances m=10 d=5 kappa<=100: at most " + std::to_string(worst_iters) +
                    " iterations, |x - x*| <= " + sci(worst_x) + ", contraction <= " + rho_text);
}

// Iterations to reach the relative error target, or max() if never.
std::size_t iterations_to_target(const Problem& p, const Topology& t, SolverConfig c, double f_star,
                                 double target, std::size_t cap) {
  c.max_iter = cap;
  c.tol = 0.0;
  RunOptions o;
  o.f_star = f_star;
  o.stop_rel_error = target;
  try {
    const RunResult r = run(p, t, c, o);
    const auto hit = iterations_to_reach(r.trace, target);
    return hit ? *hit : std::numeric_limits<std::size_t>::max();
  } catch (const DivergenceError&) {
    return std::numeric_limits<std::size_t>::max();
  }
}

std::string count_text(std::size_t n) {
  return n == std::numeric_limits<std::size_t>::max() ? std::string("never") : std::to_string(n);
}

Verdict method_ordering() {
  Checker check;
  std::ostringstream summary;
  const double target = 1e-6;
  const std::size_t cap = 3000;
  const double grid[] = {1.0, 10.0, 100.0, 300.0, 1000.0};

  struct Instance {
    std::string name;
    Problem problem;
  };
  std::vector<Instance> instances;
  {
    const Dataset ds = skin_style_dataset(5000, 1);
    instances.push_back({"skin-style n=5000 d=3", logistic_problem(take_and_partition(ds, 5000, 20, 2), 2e-6)});
    support::Gen gen(108);
    instances.push_back({"synthetic logistic n=2000 d=10", random_logistic_problem(gen, 20, 10, 100, 2e-6)});
  }
  const Topology t = build_random_binomial(20, 0.2, 7);

  for (const Instance& inst : instances) {
    const double f_star = centralized_reference(inst.problem).f_star;
    SolverConfig bfgs;
    bfgs.mu1 = bfgs.mu2 = 1000.0;
    bfgs.eps = 1e-5;
    const std::size_t n_bfgs = iterations_to_target(inst.problem, t, bfgs, f_star, target, cap);
    // The first-order variant gets its best penalty from the grid.
    std::size_t n_first = std::numeric_limits<std::size_t>::max();
    double best_mu = 0.0;
    for (double mu : grid) {
      SolverConfig c;
      c.method = Method::kFirstOrder;
      c.mu1 = c.mu2 = mu;
      c.eps = 1e-5;
      const std::size_t n = iterations_to_target(inst.problem, t, c, f_star, target, std::min(cap, n_first));
      if (n < n_first) {
        n_first = n;
        best_mu = mu;
      }
    }
    check.require(n_bfgs < n_first, inst.name + ": bfgs_admm " + count_text(n_bfgs) + " vs first_order " +
                                         count_text(n_first) + " iterations to 1e-6");
    summary << inst.name << ": " << count_text(n_bfgs) << " vs " << count_text(n_first);
    if (best_mu > 0.0) summary << " (first_order best mu=" << best_mu << ")";
    summary << "; ";
  }

  // Approximation error of the Hessian surrogate on quadratics.
  support::Gen gen(109);
  for (int trial = 0; trial < 3; ++trial) {
    const int m = 6, d = 4;
    const Problem p = quadratic_problem(random_quadratic_agents(m, d, 20.0, gen.seed()));
    const Topology tq = gen.graph(m);
    const double m_f = p.curvature_bounds()->upper;
    std::vector<double> tails[2];
    double worst_first = 0.0;
    for (int which = 0; which < 2; ++which) {
      SolverConfig c;
      c.method = which == 0 ? Method::kBfgsAdmm : Method::kFirstOrder;
      c.eps = theory_epsilon(p.curvature_bounds()->lower, m_f);
      c.max_iter = 400;
      c.tol = 0.0;
      const RunResult r = run(p, tq, c);
      const std::size_t n = r.trace.records.size();
      for (std::size_t k = 0; k < n; ++k) {
        const double e = r.trace.records[k].e_ratio;
        if (which == 1) worst_first = std::max(worst_first, e);
        if (k >= n - n / 4) tails[which].push_back(e);
      }
    }
    check.require(worst_first <= m_f * (1.0 + 1e-12),
                  "first-order e_ratio " + sci(worst_first) + " exceeds M_f " + sci(m_f));
    const double med_b = median(tails[0]), med_f = median(tails[1]);
    check.require(med_b < med_f, "median e_ratio bfgs " + sci(med_b) + " not below first-order " + sci(med_f));
    if (trial == 0) {
      summary << "e_ratio: first-order max " << sci(worst_first) << " <= M_f " << sci(m_f) << ", medians "
              << sci(med_b) << " < " << sci(med_f);
    }
  }
  return check.done(summary.str());
}

Verdict extra_equivalence() {
  support::Gen gen(110);
  Checker check;
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const int m = gen.integer(2, 8), d = gen.integer(1, 4);
    const Problem p = trial % 2 ? random_logistic_problem(gen, m, d, 15, 0.0) : random_quadratic_problem(gen, m, d, 0.0);
    const Topology t = gen.graph(m);
    SolverConfig e;
    e.method = Method::kExtra;
    // Stepsize 1/eps below 1/M_f and a PSD mixing matrix keep the run stable.
    e.mu1 = gen.uniform(1.0, 2.0);
    e.mu2 = gen.uniform(0.5, 2.0);
    e.eps = gen.uniform(6.0, 10.0);
    e.designated = gen.integer(0, m - 1);
    SolverConfig f = e;
    f.method = Method::kFirstOrder;
    f.stepsize_override = 1.0 / e.eps;
    SolverState a = initial_state(p, t, e), b = initial_state(p, t, f);
    for (int k = 0; k < 100; ++k) {
      a = extra_step(a, p, t, e);
      b = first_order_step(b, p, t, f);
      for (int i = 0; i < m; ++i) {
        const double gap = (a.x[static_cast<std::size_t>(i)] - b.x[static_cast<std::size_t>(i)]).norm();
        worst = std::max(worst, gap);
        check.require(gap <= 1e-10, "trajectory gap " + sci(gap) + " at iteration " + std::to_string(k));
      }
    }
  }
  return check.done("5 smooth instances x 100 iterations, worst gap " + sci(worst));
}

Verdict determinism() {
  Checker check;
  const Dataset ds = skin_style_dataset(1000, 3);
  const Problem logistic = logistic_problem(take_and_partition(ds, 1000, 12, 4), 2e-6);
  support::Gen gen(111);
  const Problem quad = random_quadratic_problem(gen, 9, 4, 0.05);
  const Topology t12 = build_random_binomial(12, 0.3, 5);
  const Topology t9 = gen.graph(9);
  int compared = 0;
  for (Method method : {Method::kBfgsAdmm, Method::kFirstOrder}) {
    for (int which = 0; which < 2; ++which) {
      const Problem& p = which == 0 ? logistic : quad;
      const Topology& t = which == 0 ? t12 : t9;
      SolverConfig c;
      c.method = method;
      c.eps = method == Method::kFirstOrder ? 6.0 : 1.0;
      c.max_iter = 200;
      c.tol = 0.0;
      auto csv = [&](int threads) {
        SolverConfig cc = c;
        cc.threads = threads;
        std::ostringstream out;
        write_trace_csv(out, run(p, t, cc).trace);
        return out.str();
      };
      const std::string serial = csv(1);
      check.require(serial == csv(1), std::string(to_string(method)) + ": repeated serial runs differ");
      check.require(serial == csv(4), std::string(to_string(method)) + ": serial and 4-thread traces differ");
      compared += 2;
    }
  }
  return check.done(std::to_string(compared) + " trace pairs byte-identical (serial vs repeat, serial vs 4 threads)");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"graph_identities", graph_identities},
      {"bfgs_secant", bfgs_secant},
      {"sherman_morrison_assembly", sherman_morrison_assembly},
      {"prox_and_gradient_oracles", prox_and_gradients},
      {"reference_admm_equivalence", reference_equivalence},
      {"dual_inclusion", dual_inclusion},
      {"dual_column_space", dual_column_space},
      {"quadratic_convergence", quadratic_convergence},
      {"method_ordering", method_ordering},
      {"extra_equivalence", extra_equivalence},
      {"determinism", determinism},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-28s %6.1fs  %s\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failed, criteria.size(), total);
  return failed == 0 ? 0 : 1;
}

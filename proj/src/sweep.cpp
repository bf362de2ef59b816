#include "gridnls/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

#include "gridnls/function_io.hpp"
#include "gridnls/functionals.hpp"

namespace gridnls {

std::vector<double> Range::values() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
    throw std::invalid_argument("range: bounds and step must be finite");
  }
  if (!(step > 0.0)) throw std::invalid_argument("range: step must be positive");
  if (hi < lo) throw std::invalid_argument("range: empty (hi < lo)");
  // Index-based so that lo + k*step does not accumulate drift.
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + static_cast<double>(k) * step;
  return out;
}

int resolve_thread_count(int requested, std::size_t jobs) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("GRIDNLS_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  n = std::min<long long>(n, static_cast<long long>(jobs));
  return std::max(n, 1);
}

std::vector<PhasePoint> run_sweep(const SweepSpec& spec) {
  const auto ps = spec.p_range.values();
  const auto mus = spec.mu_range.values();
  const auto graph = build_grid(spec.grid);

  // Critical-mass estimates are computed once per p, before the pool starts.
  std::map<double, double> mu_p;
  std::map<double, std::string> mu_p_error;
  if (spec.relative_to_critical) {
    for (double p : ps) {
      try {
        mu_p[p] = estimate_critical_mass(graph, p, EstimateMethod::Formula).value;
      } catch (const std::exception& ex) {
        mu_p_error[p] = ex.what();
      }
    }
  }

  std::vector<PhasePoint> rows(ps.size() * mus.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < mus.size(); ++j) {
      auto& r = rows[i * mus.size() + j];
      r.p = ps[i];
      r.mu = mus[j];
    }
  }

  auto run_point = [&](PhasePoint& r) {
    try {
      if (spec.relative_to_critical) {
        if (auto it = mu_p_error.find(r.p); it != mu_p_error.end()) throw std::invalid_argument(it->second);
        r.mu_p_estimate_used = mu_p.at(r.p);
        r.mu *= *r.mu_p_estimate_used;
      }
      MinimizeConfig cfg = spec.overrides;
      cfg.p = r.p;
      cfg.mu = r.mu;
      cfg.seed = spec.seed;
      const auto res = minimize_energy(graph, cfg);
      r.status = std::string(to_string(res.status));
      r.energy = res.energy;
      r.iters = res.iterations;
      r.grad_norm = res.grad_norm;
    } catch (const std::exception& ex) {
      r.status = "Error";
      r.energy = std::nan("");
      r.grad_norm = std::nan("");
      r.error = ex.what();
    }
  };

  const int workers = resolve_thread_count(spec.threads, rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) run_point(rows[k]);
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const PhasePoint& a, const PhasePoint& b) { return a.p != b.p ? a.p < b.p : a.mu < b.mu; });
  return rows;
}

void write_sweep_csv(const std::vector<PhasePoint>& rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.p) << ',' << format_double(r.mu) << ',' << r.status << ',' << format_double(r.energy) << ','
        << r.iters << ',' << format_double(r.grad_norm) << '\n';
  }
}

}  // namespace gridnls

#include "descentlab.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <sstream>
#include <string>

#include "descentlab/chain.hpp"
#include "descentlab/error.hpp"
#include "descentlab/laplace.hpp"
#include "descentlab/limits.hpp"
#include "descentlab/random.hpp"
#include "descentlab/rate.hpp"
#include "descentlab/sldp.hpp"
#include "descentlab/validate.hpp"

namespace dl = descentlab;

struct dl_pmf {
  dl::JointPmf pmf;
};

struct dl_rng {
  dl::RandomStream stream;
};

namespace {

thread_local std::string last_error;

dl_status fail(dl_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
dl_status guarded(Body&& body) noexcept {
  try {
    body();
    return DL_OK;
  } catch (const dl::Error& e) {
    return fail(static_cast<dl_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DL_ERR_SIZE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(DL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DL_ERR_INTERNAL, "unknown error");
  }
}

dl::Quadrant to_quadrant(dl_quadrant q) {
  switch (q) {
    case DL_PP: return dl::Quadrant::kPP;
    case DL_MM: return dl::Quadrant::kMM;
    case DL_MP: return dl::Quadrant::kMP;
    case DL_PM: return dl::Quadrant::kPM;
  }
  throw dl::DomainError("unknown quadrant code");
}

template <class T>
void require(T* ptr) {
  if (ptr == nullptr) throw dl::DomainError("null output pointer");
}

void copy_estimate(const dl::SldpEstimate& e, dl_sldp_estimate* out) {
  out->n = e.n;
  out->x = e.x;
  out->y = e.y;
  out->quadrant = static_cast<dl_quadrant>(e.quadrant);
  out->log_estimate = e.log_estimate;
  out->estimate = e.estimate;
  out->correction = e.correction;
  out->underflow = e.underflow ? 1 : 0;
}

void copy_cov(const dl::CovEstimate& c, dl_cov_estimate* out) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out->entries[i][j] = c.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      out->std_error[i][j] = c.std_error[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  out->reps = c.reps;
}

dl::TruncationPolicy policy_for(double rel_tol) {
  dl::TruncationPolicy policy;
  if (rel_tol > 0) policy.rel_tol = rel_tol;
  return policy;
}

}  // namespace

extern "C" {

DL_API const char* dl_last_error(void) { return last_error.c_str(); }

DL_API const char* dl_version(void) { return "0.1.0"; }

DL_API dl_status dl_pmf_create(int n, unsigned threads, dl_pmf** out) {
  return guarded([&] {
    require(out);
    *out = nullptr;
    *out = new dl_pmf{dl::exact_joint_pmf(n, threads)};
  });
}

DL_API void dl_pmf_destroy(dl_pmf* pmf) { delete pmf; }

DL_API int dl_pmf_size(const dl_pmf* pmf) { return pmf ? pmf->pmf.n() : 0; }

DL_API dl_status dl_pmf_prob(const dl_pmf* pmf, int d, int dprime, double* out) {
  return guarded([&] {
    require(pmf);
    require(out);
    const int n = pmf->pmf.n();
    if (d < 0 || d >= n || dprime < 0 || dprime >= n) throw dl::DomainError("dl_pmf_prob: index out of range");
    *out = pmf->pmf(d, dprime);
  });
}

DL_API dl_status dl_pmf_csv(const dl_pmf* pmf, char* buf, size_t size, size_t* needed) {
  return guarded([&] {
    require(pmf);
    std::ostringstream os;
    dl::write_pmf_csv(os, pmf->pmf);
    const std::string text = os.str();
    if (needed) *needed = text.size() + 1;
    if (buf == nullptr) return;
    if (size < text.size() + 1) throw dl::DomainError("dl_pmf_csv: buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

DL_API dl_status dl_pmf_quadrant_tail(const dl_pmf* pmf, double x, double y, dl_quadrant q, double* out) {
  return guarded([&] {
    require(pmf);
    require(out);
    *out = dl::quadrant_tail(pmf->pmf, x, y, to_quadrant(q));
  });
}

DL_API dl_status dl_pmf_marginal_tail(const dl_pmf* pmf, double x, double* out) {
  return guarded([&] {
    require(pmf);
    require(out);
    *out = dl::marginal_upper_tail(pmf->pmf, x);
  });
}

DL_API dl_status dl_rng_create(uint64_t seed, dl_rng** out) {
  return guarded([&] {
    require(out);
    *out = new dl_rng{dl::RandomStream(seed)};
  });
}

DL_API dl_status dl_rng_create_replica(uint64_t seed, uint64_t index, dl_rng** out) {
  return guarded([&] {
    require(out);
    *out = new dl_rng{dl::RandomStream::for_replica(seed, index)};
  });
}

DL_API void dl_rng_destroy(dl_rng* rng) { delete rng; }

DL_API dl_status dl_sample_final(int n, dl_rng* rng, int* d, int* dprime) {
  return guarded([&] {
    require(rng);
    require(d);
    require(dprime);
    const dl::ChainState s = dl::sample_final(n, rng->stream);
    *d = s.d;
    *dprime = s.dp;
  });
}

DL_API dl_status dl_solve_tilt(double x, double residual_tol, dl_tilt* out) {
  return guarded([&] {
    require(out);
    dl::TiltOptions options;
    if (residual_tol > 0) options.residual_tol = residual_tol;
    const dl::TiltSolution s = dl::solve_tilt(x, options);
    *out = dl_tilt{s.x, s.t_x, s.rate, s.sigma2};
  });
}

DL_API dl_status dl_rate(double x, double* out) {
  return guarded([&] {
    require(out);
    *out = dl::rate(x);
  });
}

DL_API dl_status dl_joint_rate(double x, double y, double* out) {
  return guarded([&] {
    require(out);
    *out = dl::joint_rate(x, y);
  });
}

DL_API dl_status dl_sum_rate(double y, double* out) {
  return guarded([&] {
    require(out);
    *out = dl::sum_rate(y);
  });
}

DL_API dl_status dl_cgf(double t, double* value, double* d1, double* d2) {
  return guarded([&] {
    if (value) *value = dl::cgf(t);
    if (d1) *d1 = dl::cgf_d1(t);
    if (d2) *d2 = dl::cgf_d2(t);
  });
}

DL_API dl_status dl_laplace(int n, double t, double s, dl_laplace_method method, double rel_tol,
                            unsigned threads, double* value, double* log_value) {
  return guarded([&] {
    require(value);
    require(log_value);
    dl::LaplaceValue v;
    switch (method) {
      case DL_LAPLACE_CLOSED:
        v = dl::mn_closed(n, t, s, policy_for(rel_tol));
        break;
      case DL_LAPLACE_EXACT:
        v = dl::mn_exact(dl::exact_joint_pmf(n, threads), t, s);
        break;
      case DL_LAPLACE_AXIS:
        if (s != 0.0) throw dl::DomainError("laplace: the axis method requires s = 0");
        v = dl::mn_axis(n, t, policy_for(rel_tol));
        break;
      default:
        throw dl::DomainError("laplace: unknown method");
    }
    *value = v.value;
    *log_value = v.log_value;
  });
}

DL_API dl_status dl_sldp_joint(int n, double x, double y, dl_quadrant q, dl_sldp_estimate* out) {
  return guarded([&] {
    require(out);
    copy_estimate(dl::sldp_joint(n, x, y, to_quadrant(q)), out);
  });
}

DL_API dl_status dl_sldp_marginal(int n, double x, dl_sldp_estimate* out) {
  return guarded([&] {
    require(out);
    copy_estimate(dl::sldp_marginal(n, x), out);
  });
}

DL_API dl_status dl_dependence_factor(double x, double y, dl_quadrant q, double* out) {
  return guarded([&] {
    require(out);
    *out = dl::dependence_factor(x, y, to_quadrant(q));
  });
}

DL_API dl_status dl_tail_mc(int n, double x, double y, dl_quadrant q, long reps, uint64_t seed,
                            unsigned threads, double* estimate, double* std_error) {
  return guarded([&] {
    require(estimate);
    require(std_error);
    const dl::McTail mc = dl::quadrant_tail_mc(n, x, y, to_quadrant(q), reps, seed, threads);
    *estimate = mc.estimate;
    *std_error = mc.std_error;
  });
}

DL_API dl_status dl_clt_covariance(int n, long reps, uint64_t seed, unsigned threads, dl_cov_estimate* out) {
  return guarded([&] {
    require(out);
    copy_cov(dl::clt_covariance(n, reps, seed, threads), out);
  });
}

DL_API dl_status dl_fclt_cross_cov(int n, double s, double t, long reps, uint64_t seed, unsigned threads,
                                   dl_cov_estimate* out) {
  return guarded([&] {
    require(out);
    copy_cov(dl::fclt_cross_cov(n, s, t, reps, seed, threads), out);
  });
}

DL_API dl_status dl_sum_clt(int n, long reps, uint64_t seed, unsigned threads, double* value,
                            double* std_error) {
  return guarded([&] {
    require(value);
    require(std_error);
    const dl::ScalarEstimate e = dl::sum_clt_check(n, reps, seed, threads);
    *value = e.value;
    *std_error = e.std_error;
  });
}

DL_API dl_status dl_path_statistics(long n_final, uint64_t seed, dl_path_stat* out) {
  return guarded([&] {
    require(out);
    const dl::PathStat p = dl::path_statistics(n_final, seed);
    *out = dl_path_stat{p.n_final, p.qsl_value, p.lil_value};
  });
}

DL_API dl_status dl_validate(const char* suite, int max_n, unsigned threads, dl_check_sink sink, void* ctx,
                             int* all_passed) {
  return guarded([&] {
    if (suite == nullptr) throw dl::DomainError("dl_validate: suite name is required");
    const std::vector<dl::CheckResult> results = dl::run_validation(suite, max_n, threads);
    bool ok = true;
    for (const dl::CheckResult& r : results) {
      ok = ok && r.passed;
      if (sink) sink(ctx, r.name.c_str(), r.value, r.threshold, r.passed ? 1 : 0);
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"

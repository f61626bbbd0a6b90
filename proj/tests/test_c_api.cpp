// Exercises the shared library through its C header only.
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "descentlab.h"
#include "doctest.h"

TEST_CASE("version and error state") {
  CHECK(std::string(dl_version()) == "0.1.0");
  dl_pmf* pmf = nullptr;
  CHECK(dl_pmf_create(0, 1, &pmf) == DL_ERR_DOMAIN);
  CHECK(pmf == nullptr);
  CHECK(std::strlen(dl_last_error()) > 0);
  CHECK(dl_pmf_create(5000, 1, &pmf) == DL_ERR_SIZE_LIMIT);
  CHECK(dl_pmf_create(3, 1, nullptr) == DL_ERR_DOMAIN);
}

TEST_CASE("pmf handle") {
  dl_pmf* pmf = nullptr;
  REQUIRE(dl_pmf_create(3, 1, &pmf) == DL_OK);
  CHECK(dl_pmf_size(pmf) == 3);
  double p = -1;
  CHECK(dl_pmf_prob(pmf, 1, 1, &p) == DL_OK);
  CHECK(p == doctest::Approx(4.0 / 6));
  CHECK(dl_pmf_prob(pmf, 3, 0, &p) == DL_ERR_DOMAIN);
  CHECK(dl_pmf_quadrant_tail(pmf, 0.6, 0.6, DL_PP, &p) == DL_OK);
  CHECK(p == doctest::Approx(1.0 / 6));
  CHECK(dl_pmf_quadrant_tail(pmf, 0.4, 0.6, DL_PP, &p) == DL_ERR_DOMAIN);
  CHECK(dl_pmf_marginal_tail(pmf, 0.6, &p) == DL_OK);
  CHECK(p == doctest::Approx(1.0 / 6));

  std::size_t needed = 0;
  CHECK(dl_pmf_csv(pmf, nullptr, 0, &needed) == DL_OK);
  std::vector<char> buf(needed);
  CHECK(dl_pmf_csv(pmf, buf.data(), buf.size(), &needed) == DL_OK);
  const std::string csv(buf.data());
  CHECK(csv.rfind("n,d,dprime,prob\n3,0,0,0.16666666666666666\n", 0) == 0);
  CHECK(csv.size() + 1 == needed);
  char small[4];
  CHECK(dl_pmf_csv(pmf, small, sizeof small, &needed) == DL_ERR_DOMAIN);
  CHECK(needed == buf.size());
  dl_pmf_destroy(pmf);
  dl_pmf_destroy(nullptr);
}

TEST_CASE("sampling streams") {
  dl_rng* a = nullptr;
  dl_rng* b = nullptr;
  REQUIRE(dl_rng_create(77, &a) == DL_OK);
  REQUIRE(dl_rng_create(77, &b) == DL_OK);
  for (int i = 0; i < 20; ++i) {
    int d1, e1, d2, e2;
    REQUIRE(dl_sample_final(50, a, &d1, &e1) == DL_OK);
    REQUIRE(dl_sample_final(50, b, &d2, &e2) == DL_OK);
    REQUIRE(d1 == d2);
    REQUIRE(e1 == e2);
  }
  int d, e;
  CHECK(dl_sample_final(0, a, &d, &e) == DL_ERR_DOMAIN);
  dl_rng_destroy(a);
  dl_rng_destroy(b);
}

TEST_CASE("rate functions") {
  dl_tilt t{};
  REQUIRE(dl_solve_tilt(0.75, 0, &t) == DL_OK);
  CHECK(t.x == 0.75);
  double v, d1, d2;
  REQUIRE(dl_cgf(t.t_x, &v, &d1, &d2) == DL_OK);
  CHECK(std::abs(d1 - 0.75) <= 1e-12);
  CHECK(d2 == doctest::Approx(t.sigma2));
  CHECK(dl_solve_tilt(1.5, 0, &t) == DL_ERR_DOMAIN);
  double r;
  CHECK(dl_rate(0.0, &r) == DL_OK);
  CHECK(std::isinf(r));
  double j;
  REQUIRE(dl_sum_rate(1.4, &j) == DL_OK);
  REQUIRE(dl_rate(0.7, &r) == DL_OK);
  CHECK(std::abs(j - 2 * r) <= 1e-8);
  double jr;
  REQUIRE(dl_joint_rate(0.7, 0.7, &jr) == DL_OK);
  CHECK(jr == 2 * r);
}

TEST_CASE("Laplace methods agree") {
  double closed, exact, axis, lc, le, la;
  REQUIRE(dl_laplace(12, 1.0, -0.5, DL_LAPLACE_CLOSED, 0, 1, &closed, &lc) == DL_OK);
  REQUIRE(dl_laplace(12, 1.0, -0.5, DL_LAPLACE_EXACT, 0, 1, &exact, &le) == DL_OK);
  CHECK(std::abs(lc - le) <= 1e-10);
  REQUIRE(dl_laplace(12, 1.0, 0.0, DL_LAPLACE_AXIS, 0, 1, &axis, &la) == DL_OK);
  REQUIRE(dl_laplace(12, 1.0, 0.0, DL_LAPLACE_EXACT, 0, 1, &exact, &le) == DL_OK);
  CHECK(std::abs(la - le) <= 1e-10);
  CHECK(dl_laplace(12, 1.0, 0.5, DL_LAPLACE_AXIS, 0, 1, &axis, &la) == DL_ERR_DOMAIN);
  CHECK(dl_laplace(12, 1.0, 0.5, static_cast<dl_laplace_method>(9), 0, 1, &axis, &la) == DL_ERR_DOMAIN);
}

TEST_CASE("sharp tail approximations") {
  dl_sldp_estimate e{};
  REQUIRE(dl_sldp_joint(256, 0.7, 0.7, DL_PP, &e) == DL_OK);
  CHECK(e.quadrant == DL_PP);
  CHECK(e.estimate == std::exp(e.log_estimate));
  CHECK(e.underflow == 0);
  dl_sldp_estimate m{};
  REQUIRE(dl_sldp_marginal(256, 0.7, &m) == DL_OK);
  CHECK(std::isnan(m.y));
  double f;
  REQUIRE(dl_dependence_factor(0.7, 0.7, DL_MP, &f) == DL_OK);
  CHECK(f < 1);
  CHECK(dl_sldp_joint(256, 0.7, 0.7, static_cast<dl_quadrant>(7), &e) == DL_ERR_DOMAIN);
  double est, se;
  REQUIRE(dl_tail_mc(10, 0.6, 0.6, DL_PP, 5000, 1, 2, &est, &se) == DL_OK);
  CHECK(se > 0);
}

TEST_CASE("limit statistics") {
  dl_cov_estimate c{};
  REQUIRE(dl_clt_covariance(100, 500, 1, 2, &c) == DL_OK);
  CHECK(c.reps == 500);
  REQUIRE(dl_fclt_cross_cov(100, 0.5, 1.0, 500, 1, 2, &c) == DL_OK);
  double v, se;
  REQUIRE(dl_sum_clt(100, 500, 1, 2, &v, &se) == DL_OK);
  dl_path_stat p{};
  REQUIRE(dl_path_statistics(5000, 3, &p) == DL_OK);
  CHECK(p.n_final == 5000);
  CHECK(dl_path_statistics(10, 3, &p) == DL_ERR_DOMAIN);
}

namespace {
struct Collected {
  int count = 0;
  int failed = 0;
};
void sink(void* ctx, const char*, double, double, int passed) {
  auto* c = static_cast<Collected*>(ctx);
  ++c->count;
  c->failed += !passed;
}
}  // namespace

TEST_CASE("validation through callbacks") {
  Collected c;
  int all = 0;
  REQUIRE(dl_validate("eulerian", 20, 1, &sink, &c, &all) == DL_OK);
  CHECK(all == 1);
  CHECK(c.count > 0);
  CHECK(c.failed == 0);
  CHECK(dl_validate("nope", 20, 1, &sink, &c, &all) == DL_ERR_DOMAIN);
  CHECK(dl_validate("thm21", 20, 1, &sink, &c, &all) == DL_ERR_SIZE_LIMIT);
}

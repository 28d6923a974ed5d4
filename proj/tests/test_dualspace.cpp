#include <doctest.h>

#include "singcert/dualspace.hpp"
#include "support.hpp"

using namespace singcert;
using namespace singcert::test;

TEST_CASE("macaulay_nullity: order 0 is the evaluation functional") {
  Case c = load_case("cyclic_cubes");
  CHECK(macaulay_nullity(c.f, c.x, 0) == 1);
  Case r = load_case("regular_pt");
  CHECK(macaulay_nullity(r.f, r.x, 0) == 1);
}

TEST_CASE("macaulay_nullity: cubes orders 1 and 4") {
  Case c = load_case("cyclic_cubes");
  CHECK(macaulay_nullity(c.f, c.x, 1) == 4);   // breadth 3
  CHECK(macaulay_nullity(c.f, c.x, 4) == 11);  // the full multiplicity
}

TEST_CASE("dual_invariants: corpus values") {
  auto check = [](const std::string& name, int kappa, int rho, int mu) {
    Case c = load_case(name);
    DualInvariants di = dual_invariants(c.f, c.x);
    CHECK(di.breadth == kappa);
    CHECK(di.depth == rho);
    CHECK(di.multiplicity == mu);
    CHECK(di.dims[0] == 1);
    for (size_t k = 1; k < di.dims.size(); ++k) CHECK(di.dims[k] >= di.dims[k - 1]);
    CHECK(di.dims[di.depth] == mu);
    CHECK(di.dims[di.depth + 1] == mu);
  };
  check("cyclic_cubes", 3, 4, 11);
  check("shifted_cubes", 3, 3, 8);
  check("sin_cubes_trunc", 3, 4, 11);
  check("two_squares", 2, 2, 4);
  check("cusp_line", 1, 2, 3);
  check("simple_double", 1, 1, 2);
  check("regular_pt", 0, 0, 1);
}

TEST_CASE("dual_invariants: x^n - yz family multiplicity 2 + 3n") {
  Case q = load_case("cyclic_quartics");
  DualInvariants di = dual_invariants(q.f, q.x);
  CHECK(di.multiplicity == 14);  // n = 4
  Case c = load_case("cyclic_cubes");
  CHECK(dual_invariants(c.f, c.x).multiplicity == 11);  // n = 3
}

TEST_CASE("dual_invariants: NotStabilized when kmax is too small") {
  Case c = load_case("cyclic_cubes");
  DualConfig cfg;
  cfg.kmax = 3;
  CHECK_THROWS_AS(dual_invariants(c.f, c.x, cfg), NotStabilizedError);
}

TEST_CASE("macaulay size guard") {
  Case c = load_case("cyclic_cubes");
  DualConfig cfg;
  cfg.max_entries = 10;
  CHECK_THROWS_AS(macaulay_nullity(c.f, c.x, 3, cfg), MacaulaySizeError);
}

TEST_CASE("residual flag warns away from a root") {
  Case c = load_case("cyclic_cubes");
  CVector x(3);
  x << Complex(0.3, 0), Complex(0.1, 0), Complex(0, 0);
  DualInvariants di = dual_invariants(c.f, x);
  CHECK_FALSE(di.residual_ok);
}

TEST_CASE("multiplicity floor: corpus multiplicities are at least 2^breadth") {
  for (const auto& name : all_cases()) {
    Case c = load_case(name);
    DualInvariants di = dual_invariants(c.f, c.x);
    if (di.multiplicity > 1) CHECK(di.multiplicity >= (1 << di.breadth));
  }
}

TEST_CASE("dual invariants are invariant under unitary change of coordinates") {
  Rng rng(31);
  for (const auto& name : {std::string("cyclic_cubes"), std::string("simple_double")}) {
    Case c = load_case(name);
    DualInvariants base = dual_invariants(c.f, c.x);
    CMatrix U = random_unitary(c.f.nvars, rng);
    PolySystem g = linear_substitute(c.f, U);  // g(y) = f(U y), zero at U^H x
    CVector y = U.adjoint() * c.x;
    DualInvariants moved = dual_invariants(g, y);
    CHECK(moved.breadth == base.breadth);
    CHECK(moved.depth == base.depth);
    CHECK(moved.multiplicity == base.multiplicity);
  }
}

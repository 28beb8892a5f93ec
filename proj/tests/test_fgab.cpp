#include <algorithm>
#include <random>
#include <set>

#include "capk/errors.hpp"
#include "capk/fgab/group.hpp"
#include "capk/fgab/normal_form.hpp"
#include "doctest.h"

using namespace capk;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// gcd of all k x k minors, computed by brute force.
Int determinantal_divisor(const IntMatrix& m, std::size_t k) {
  std::vector<std::size_t> rows(k), cols(k);
  Int g = 0;
  std::vector<bool> rsel(m.rows()), csel(m.cols());
  std::fill(rsel.end() - k, rsel.end(), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.end() - k, csel.end(), true);
    do {
      IntMatrix sub(k, k);
      std::size_t a = 0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        if (!rsel[i]) continue;
        std::size_t b = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
          if (csel[j]) sub(a, b++) = m(i, j);
        ++a;
      }
      g = gcd(g, determinant(sub));
    } while (std::next_permutation(csel.begin(), csel.end()));
  } while (std::next_permutation(rsel.begin(), rsel.end()));
  return g;
}

// Orders of all elements of Z/d1 x ... by enumeration in invariant coordinates.
std::size_t count_killed(const FGAbGroup& a, const Int& n) {
  std::size_t c = 0;
  for (auto& x : a.elements())
    if (a.is_zero(scale(x, n))) ++c;
  return c;
}

}  // namespace

TEST_CASE("smith normal form examples") {
  SmithForm s = smith_normal_form(IntMatrix::identity(2));
  CHECK(s.D == IntMatrix::identity(2));
  CHECK(s.U == IntMatrix::identity(2));
  CHECK(s.V == IntMatrix::identity(2));

  IntMatrix m{{2, 4}, {6, 8}};
  s = smith_normal_form(m);
  CHECK(s.D == IntMatrix({{2, 0}, {0, 4}}));
  CHECK(s.U * m * s.V == s.D);

  IntMatrix z(2, 3);
  s = smith_normal_form(z);
  CHECK(s.D == z);

  s = smith_normal_form(IntMatrix(0, 0));
  CHECK(s.D.rows() == 0);
}

TEST_CASE("smith normal form random suite") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t r = dim(rng), c = dim(rng);
    IntMatrix m = random_matrix(rng, r, c, -50, 50);
    if (trial % 7 == 0 && r > 1) m.set_row(r - 1, m.row(0));  // force rank deficiency sometimes
    SmithForm s = smith_normal_form(m);
    REQUIRE(s.U * m * s.V == s.D);
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    std::size_t k = std::min(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) CHECK(s.D(i, j) == 0);
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(s.D(i, i) >= 0);
      if (i + 1 < k && s.D(i, i) != 0) CHECK(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
      if (s.D(i, i) == 0 && i + 1 < k) CHECK(s.D(i + 1, i + 1) == 0);
    }
    // Independent oracle: d_1...d_k equals the gcd of k-minors.
    if (r <= 4 && c <= 4) {
      Int prod = 1;
      for (std::size_t i = 1; i <= k; ++i) {
        prod *= s.D(i - 1, i - 1);
        CHECK(prod == determinantal_divisor(m, i));
      }
    }
    // Reproducible canonical form.
    CHECK(smith_normal_form(m).D == s.D);
  }
}

TEST_CASE("hermite form and solving") {
  IntMatrix a{{4, 6}, {2, 3}, {0, 5}};
  HermiteForm h = hermite_form(a);
  CHECK(h.T * a == h.H);
  CHECK(h.rank == 2);
  CHECK(h.H.row(0) == iv({2, 3}));
  CHECK(h.H.row(1) == iv({0, 5}));
  auto c = solve_left(a, iv({2, 8}));
  REQUIRE(c);
  CHECK(vec_mul(*c, a) == iv({2, 8}));
  CHECK(!solve_left(a, iv({1, 0})));
  IntMatrix k = left_kernel(a);
  CHECK(k.rows() == 1);
  CHECK(is_zero(vec_mul(k.row(0), a)));
}

TEST_CASE("group from presentation") {
  FGAbGroup z(1, IntMatrix(0, 1));
  CHECK(z.free_rank() == 1);
  CHECK(z.invariant_factors().empty());
  FGAbGroup z2(1, IntMatrix{{2}});
  CHECK(z2.structure() == "Z/2");
  FGAbGroup g(2, IntMatrix{{2, 0}, {0, 4}});
  CHECK(g.invariant_factors() == std::vector<Int>{2, 4});
  CHECK(g.order() == 8);
  FGAbGroup t(0, IntMatrix(0, 0));
  CHECK(t.is_trivial());
  // Z/6 presented as Z^2 / <(2,0),(0,3)>.
  FGAbGroup z6(2, IntMatrix{{2, 0}, {0, 3}});
  CHECK(z6.invariant_factors() == std::vector<Int>{6});
}

TEST_CASE("element coords equivalence") {
  std::mt19937_64 rng(7);
  FGAbGroup g(3, IntMatrix{{2, 4, 0}, {0, 6, 3}, {1, 1, 1}});
  std::uniform_int_distribution<long> d(-20, 20);
  for (int t = 0; t < 200; ++t) {
    IntVec a = iv({d(rng), d(rng), d(rng)}), b = iv({d(rng), d(rng), d(rng)});
    IntVec c = iv({d(rng), d(rng), d(rng)});
    CHECK(g.equal(a, a));
    CHECK(g.equal(a, b) == g.equal(b, a));
    if (g.equal(a, b) && g.equal(b, c)) CHECK(g.equal(a, c));
    CHECK(g.reduce(add(a, b)) == g.reduce(add(g.reduce(a), g.reduce(b))));
    CHECK(g.equal(a, g.from_invariant_coords(g.invariant_coords(a))));
    IntMatrix rel = g.relations();
    CHECK(g.reduce(add(a, rel.row(t % 3))) == g.reduce(a));
  }
}

TEST_CASE("kernel image cokernel examples") {
  FGAbGroup z = FGAbGroup::free(1);
  FGAbHom times2(z, z, IntMatrix{{2}});
  auto kic = kernel_image_cokernel(times2);
  CHECK(kic.kernel.group().is_trivial());
  CHECK(kic.image.group().structure() == "Z^1");
  CHECK(!kic.image.contains(iv({1})));
  CHECK(kic.cokernel.group.structure() == "Z/2");

  FGAbGroup z4 = FGAbGroup::cyclic(4), z2 = FGAbGroup::cyclic(2);
  FGAbHom zero = FGAbHom::zero(z4, z2);
  kic = kernel_image_cokernel(zero);
  CHECK(kic.kernel.group().structure() == "Z/4");
  CHECK(kic.cokernel.group.structure() == "Z/2");

  FGAbHom red(z4, z2, IntMatrix{{1}});
  kic = kernel_image_cokernel(red);
  CHECK(kic.kernel.group().structure() == "Z/2");
  CHECK(kic.kernel.contains(iv({2})));
  CHECK(!kic.kernel.contains(iv({1})));
  CHECK(kic.cokernel.group.is_trivial());
  // enumeration oracle
  std::size_t killed = 0;
  for (auto& x : z4.elements())
    if (z2.is_zero(red.apply(x))) ++killed;
  CHECK(killed == 2);

  CHECK_THROWS_AS(FGAbHom(z2, z4, IntMatrix{{1}}), Error);
}

TEST_CASE("n-torsion and mod n") {
  auto t = n_torsion(FGAbGroup::free(1), 5);
  CHECK(t.group().is_trivial());
  auto z6 = FGAbGroup::cyclic(6);
  t = n_torsion(z6, 2);
  CHECK(t.group().structure() == "Z/2");
  CHECK(t.contains(iv({3})));
  CHECK(count_killed(z6, 2) == 2);
  FGAbGroup g(2, IntMatrix{{2, 0}, {0, 4}});
  t = n_torsion(g, 2);
  CHECK(t.group().invariant_factors() == std::vector<Int>{2, 2});
  CHECK(t.contains(iv({1, 0})));
  CHECK(t.contains(iv({0, 2})));
  CHECK(!t.contains(iv({0, 1})));
  CHECK(count_killed(g, 2) == 4);

  CHECK(mod_n(FGAbGroup::free(1), 3).group.structure() == "Z/3");
  CHECK(mod_n(FGAbGroup::cyclic(2), 3).group.is_trivial());
  CHECK(mod_n(FGAbGroup::cyclic(4), 2).group.structure() == "Z/2");
  CHECK(n_torsion(g, 1).group().is_trivial());
  CHECK(mod_n(g, 1).group.is_trivial());
}

TEST_CASE("induced maps") {
  auto z4 = FGAbGroup::cyclic(4);
  auto im = induced_maps(FGAbHom::identity(z4), 2);
  CHECK(im.torsion_map.is_isomorphism());
  CHECK(im.torsion_map.source().structure() == "Z/2");
  CHECK(im.quotient_map.is_isomorphism());

  FGAbHom times2(z4, z4, IntMatrix{{2}});
  im = induced_maps(times2, 2);
  CHECK(im.torsion_map.is_zero());
  Subgroup k2 = image_of(im.source_torsion.inclusion(), kernel(im.torsion_map));
  Subgroup kp = kernel(times2);
  Subgroup kp2 = image_of(kp.inclusion(), n_torsion(kp.group(), 2));
  CHECK(k2.equals(kp2));
  CHECK(k2.order() == 2);

  // Reduction Z -> Z/2 with n = 2: the mod-n analogue of the identity fails.
  FGAbHom red(FGAbGroup::free(1), FGAbGroup::cyclic(2), IntMatrix{{1}});
  im = induced_maps(red, 2);
  CHECK(im.quotient_map.is_isomorphism());
  CHECK(kernel(im.quotient_map).order() == 1);
  Subgroup k = kernel(red);
  Quotient kmod = mod_n(k.group(), 2);
  CHECK(kmod.group.order() == 2);
}

TEST_CASE("torsion identity on random homomorphisms") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<long> small(1, 3);
  const long ns[] = {2, 3, 4, 6};
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t b = dim(rng), a = dim(rng);
    IntMatrix rb(b, b);
    for (std::size_t i = 0; i < b; ++i) rb(i, i) = std::uniform_int_distribution<long>(1, 12)(rng);
    FGAbGroup B(b, rb);
    IntMatrix m = random_matrix(rng, a, b, -5, 5);
    // Relations of A chosen inside {x : xM in L_B} so that M is well defined.
    IntMatrix lk = left_kernel(vstack(m, rb));
    IntMatrix pre = lk.block(0, 0, lk.rows(), a);
    IntMatrix basis = lattice_basis(pre);
    IntMatrix ra = basis;
    for (std::size_t i = 0; i < ra.rows(); ++i) ra.set_row(i, scale(ra.row(i), small(rng)));
    FGAbGroup A(a, ra);
    FGAbHom psi(A, B, m);
    Int n = ns[trial % 4];
    InducedMaps im = induced_maps(psi, n);
    Subgroup lhs = image_of(im.source_torsion.inclusion(), kernel(im.torsion_map));
    Subgroup k = kernel(psi);
    Subgroup rhs = image_of(k.inclusion(), n_torsion(k.group(), n));
    CHECK(lhs.equals(rhs));
    // |source| = |Ker| |Im|
    CHECK(A.order() == kernel(psi).order() * image(psi).order());
    // Enumeration oracle on the smaller groups.
    if (A.order() <= 2000) {
      std::size_t cnt = 0;
      for (auto& x : A.elements())
        if (A.is_zero(scale(x, n)) && B.is_zero(psi.apply(x))) {
          ++cnt;
          CHECK(lhs.contains(x));
        }
      CHECK(Int(cnt) == lhs.order());
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("check exact") {
  FGAbGroup zero, z = FGAbGroup::free(1), z2 = FGAbGroup::cyclic(2);
  auto v = check_exact({FGAbHom::zero(zero, z2), FGAbHom::identity(z2), FGAbHom::zero(z2, zero)});
  REQUIRE(v.size() == 2);
  CHECK(v[0].exact());
  CHECK(v[1].exact());

  v = check_exact({FGAbHom::zero(zero, z), FGAbHom(z, z, IntMatrix{{2}}), FGAbHom(z, z2, IntMatrix{{1}}),
                   FGAbHom::zero(z2, zero)});
  for (auto& x : v) CHECK(x.exact());

  v = check_exact({FGAbHom::zero(z2, z2), FGAbHom::identity(z2)});
  CHECK(v[0].exact());
  v = check_exact({FGAbHom::zero(z2, z2), FGAbHom::zero(z2, z2)});
  CHECK(v[0].composition_zero);
  CHECK(!v[0].kernel_equals_image);

  CHECK_THROWS_AS(check_exact({FGAbHom::identity(z2), FGAbHom::identity(z)}), Error);
}

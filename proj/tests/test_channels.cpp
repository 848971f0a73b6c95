#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "support.hpp"
#include "weakwalk/channels.hpp"
#include "weakwalk/pauli.hpp"
#include "weakwalk/walk.hpp"

using namespace weakwalk;
using testkit::max_abs_diff;

namespace {

ComplexMatrix ket_bra(int dim, int i, int j) { return unit_matrix(dim, i, j); }

std::vector<KrausChannel> builder_channels() {
  return {build_controlled_overwrite(), build_reverse_overwrite(),
          build_reset(), walk_channel(0.3),
          build_encoding_channel({1, 3, 0.4}),
          build_encoding_channel({1, 2, -0.7}),
          build_encoding_channel({2, 5, 0.25})};
}

}  // namespace

TEST_CASE("builders are trace preserving") {
  for (const KrausChannel& ch : builder_channels()) {
    CAPTURE(ch.name);
    CHECK(completeness_defect(ch) <= 1e-12);
  }
}

TEST_CASE("completeness defect detects a missing operator") {
  KrausChannel broken = build_reset();
  broken.ops.pop_back();
  CHECK(completeness_defect(broken) > 0.9);
}

TEST_CASE("apply equals the literal Kraus sum") {
  testkit::Rng rng(21);
  for (const KrausChannel& ch : builder_channels()) {
    CAPTURE(ch.name);
    const ComplexMatrix rho = testkit::random_density(rng, ch.dim);
    CHECK(max_abs_diff(weakwalk::apply(ch, rho), testkit::kraus_sum(ch, rho)) <=
          1e-15);
    CHECK(std::abs(weakwalk::apply(ch, rho).trace().real() - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(weakwalk::apply(build_reset(), identity(4) / 4.0),
                  std::invalid_argument);
}

TEST_CASE("controlled overwrite sets the memory when the pointer is one") {
  const KrausChannel write = build_controlled_overwrite();

  // Pointer |1>, memory |0>  ->  memory |1>.
  ComplexMatrix in = tensor(ket_bra(2, 1, 1), ket_bra(2, 0, 0));
  ComplexMatrix want = tensor(ket_bra(2, 1, 1), ket_bra(2, 1, 1));
  CHECK(max_abs_diff(weakwalk::apply(write, in), want) <= 1e-15);

  // Pointer |0>: the memory is untouched.
  in = tensor(ket_bra(2, 0, 0), ket_bra(2, 0, 0));
  CHECK(max_abs_diff(weakwalk::apply(write, in), in) <= 1e-15);

  // A coherent pointer decoheres and correlates with the memory.
  ComplexMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  in = tensor(plus, ket_bra(2, 0, 0));
  want = 0.5 * tensor(ket_bra(2, 0, 0), ket_bra(2, 0, 0)) +
         0.5 * tensor(ket_bra(2, 1, 1), ket_bra(2, 1, 1));
  CHECK(max_abs_diff(weakwalk::apply(write, in), want) <= 1e-15);
}

TEST_CASE("reverse overwrite triggers on pointer zero instead") {
  const KrausChannel rwrite = build_reverse_overwrite();
  const ComplexMatrix in = tensor(ket_bra(2, 0, 0), ket_bra(2, 0, 0));
  const ComplexMatrix want = tensor(ket_bra(2, 0, 0), ket_bra(2, 1, 1));
  CHECK(max_abs_diff(weakwalk::apply(rwrite, in), want) <= 1e-15);

  const ComplexMatrix hold = tensor(ket_bra(2, 1, 1), ket_bra(2, 0, 0));
  CHECK(max_abs_diff(weakwalk::apply(rwrite, hold), hold) <= 1e-15);
}

TEST_CASE("reset returns every state to ground") {
  testkit::Rng rng(23);
  const KrausChannel reset = build_reset();
  const ComplexMatrix rho = testkit::random_density(rng, 2);
  CHECK(max_abs_diff(weakwalk::apply(reset, rho), ket_bra(2, 0, 0)) <= 1e-14);
}

TEST_CASE("dilation produces a unitary extension") {
  for (const KrausChannel& ch : builder_channels()) {
    CAPTURE(ch.name);
    const DilatedChannel d = dilate(ch);
    CHECK(d.sys_dim == ch.dim);
    const ComplexMatrix u = d.unitary;
    CHECK(max_abs_diff(dagger(u) * u, identity(d.sys_dim * d.anc_dim)) <=
          1e-12);
    CHECK(max_abs_diff(u * dagger(u), identity(d.sys_dim * d.anc_dim)) <=
          1e-12);
    // The isometry columns are the |s,0> images.
    for (int s = 0; s < d.sys_dim; ++s)
      for (long r = 0; r < u.rows(); ++r)
        CHECK(std::abs(u(r, s * d.anc_dim) - d.isometry(r, s)) <= 1e-14);
  }
}

TEST_CASE("dilated action equals the Kraus action") {
  testkit::Rng rng(29);
  for (const KrausChannel& ch : builder_channels()) {
    CAPTURE(ch.name);
    const DilatedChannel d = dilate(ch);
    for (int trial = 0; trial < 8; ++trial) {
      const ComplexMatrix rho = testkit::random_density(rng, ch.dim);
      CHECK(max_abs_diff(apply_dilated(d, rho), weakwalk::apply(ch, rho)) <=
            1e-10);
    }
  }
}

TEST_CASE("dilate rejects a non-trace-preserving operator list") {
  KrausChannel bad = build_reset();
  bad.ops.pop_back();
  CHECK_THROWS_AS(dilate(bad), std::invalid_argument);
  KrausChannel empty{"empty", 2, {}};
  CHECK_THROWS_AS(dilate(empty), std::invalid_argument);
}

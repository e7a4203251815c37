#include "doctest.h"

#include "hld/errors.hpp"
#include "hld/lefschetz.hpp"

using namespace hld;

namespace {

const Ring Z = Ring::integers();

// Z^2 -> Z -> Z in degrees [-1, 1], d^{-1} = [0 3], d^0 = 0.
ChainComplex worked_complex() {
    return ChainComplex(Z, -1, {2, 1, 1}, {ExactMatrix::from_rows(Z, {{0, 3}}), ExactMatrix::from_rows(Z, {{0}})});
}

LefschetzMap worked_map(long scale) {
    return make_lefschetz_map(worked_complex(), [scale](int k) {
        if (k == 0) return ExactMatrix::from_rows(Z, {{scale, 0}});
        return ExactMatrix();
    });
}

} // namespace

TEST_CASE("validate_lefschetz") {
    CHECK(validate_lefschetz(worked_map(0)));
    CHECK(validate_lefschetz(worked_map(1)));
    ChainComplex a(Z, -1, {1, 1, 1, 1}, {ExactMatrix(Z, 1, 1), ExactMatrix(Z, 1, 1), ExactMatrix::from_rows(Z, {{1}})});
    // d^1 Φ^0 = 1 but Φ^1 d^{-1} = 0.
    LefschetzMap broken = make_lefschetz_map(a, [](int k) {
        if (k == 0) return ExactMatrix::from_rows(Z, {{1}});
        return ExactMatrix();
    });
    Check c = validate_lefschetz(broken);
    CHECK_FALSE(c);
    CHECK(c.degree == 0);
}

TEST_CASE("iterates") {
    LefschetzMap phi = worked_map(1);
    CHECK(maps_equal(iterate_lefschetz(phi, 1), phi.phi));
    ChainMap zero = iterate_lefschetz(worked_map(0), 3);
    CHECK(zero.is_zero());
    // Zero differential and Φ = 2 in every degree: Ψ_n = 2^n.
    ChainComplex flat(Z, -3, {1, 1, 1, 1, 1, 1, 1}, std::vector<ExactMatrix>(6, ExactMatrix(Z, 1, 1)));
    LefschetzMap two = make_lefschetz_map(flat, [](int k) {
        return std::abs(k) <= 2 ? ExactMatrix::from_rows(Z, {{2}}) : ExactMatrix();
    });
    ChainMap psi = iterate_lefschetz(two, 3);
    CHECK(psi(0) == ExactMatrix::from_rows(Z, {{8}}));
    CHECK(check_chain_map(psi));
    CHECK(psi.target().twist_weight() == 3);
}

TEST_CASE("hard Lefschetz report") {
    CHECK(hard_lefschetz_check(worked_map(1)).ok());
    HardLefschetzReport bad = hard_lefschetz_check(worked_map(0));
    CHECK_FALSE(bad.ok());
    CHECK(bad.first_failure() == 1);
    ChainComplex acyclic = ChainComplex::from_differentials(Z, 0, {ExactMatrix::from_rows(Z, {{1}})});
    CHECK(hard_lefschetz_check(make_lefschetz_map(acyclic, [](int) { return ExactMatrix(); })).ok());
}

TEST_CASE("worked example decomposes") {
    DecompositionTrace trace;
    LefschetzData data = worked_map(1);
    DecompositionCertificate cert = lefschetz_decompose(data, &trace);
    CHECK(trace.n0 == 1);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].alpha_check);
    REQUIRE(cert.summands.size() == 3);
    CHECK(cert.summands[0].k == -1);
    CHECK(cert.summands[0].complex == ChainComplex::concentrated(Z, 1, 1));
    CHECK(cert.summands[1].k == 0);
    CHECK(cert.summands[1].complex.total_rank() == 2);
    CHECK(cert.summands[2].k == 1);
    CHECK(cert.summands[2].complex == ChainComplex::concentrated(Z, -1, 1).with_twist_weight(1));
    CHECK(verify_certificate(worked_complex(), cert));
}

TEST_CASE("zero Lefschetz map is rejected at n=1") {
    LefschetzData data = worked_map(0);
    try {
        lefschetz_decompose(data);
        FAIL("expected a hard Lefschetz violation");
    } catch (const HardLefschetzViolation& e) {
        CHECK(e.n() == 1);
        CHECK(std::string(e.what()) == "hard Lefschetz fails at n=1");
    }
}

TEST_CASE("acyclic complex gives an empty certificate") {
    ChainComplex acyclic = ChainComplex::from_differentials(Z, 0, {ExactMatrix::from_rows(Z, {{1}})});
    LefschetzData data = make_lefschetz_map(acyclic, [](int) { return ExactMatrix(); });
    DecompositionCertificate cert = lefschetz_decompose(data);
    CHECK(cert.summands.empty());
    CHECK(verify_certificate(acyclic, cert));
}

TEST_CASE("empty certificate does not verify a non-acyclic complex") {
    DecompositionCertificate empty;
    Check c = verify_certificate(worked_complex(), empty);
    CHECK_FALSE(c);
}

TEST_CASE("tampering with the worked certificate is caught") {
    LefschetzData data = worked_map(1);
    DecompositionCertificate cert = lefschetz_decompose(data);
    for (auto& m : cert.summands[0].ins.items())
        if (!m.empty()) {
            m(0, 0) += 1;
            break;
        }
    CHECK_FALSE(verify_certificate(worked_complex(), cert));
}

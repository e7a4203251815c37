#include "doctest.h"

#include "hld/errors.hpp"
#include "hld/io.hpp"

using namespace hld;
using nlohmann::json;

namespace {

const Ring Z = Ring::integers();

Instance worked_instance() {
    ChainComplex a(Z, -1, {2, 1, 1}, {ExactMatrix::from_rows(Z, {{0, 3}}), ExactMatrix::from_rows(Z, {{0}})});
    LefschetzMap phi = make_lefschetz_map(a, [](int k) {
        if (k == 0) return ExactMatrix::from_rows(Z, {{1, 0}});
        return ExactMatrix();
    });
    return Instance{phi};
}

std::string expect_parse_error(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    FAIL("no parse error");
    return {};
}

GeneratorProfile small_profile(std::uint64_t seed) {
    GeneratorProfile p;
    p.n0 = 1;
    p.shapes[-1] = {1, {2}};
    p.shapes[1] = {1, {2}};
    p.shapes[0] = {0, {3}};
    p.scramble_ops = 8;
    p.seed = seed;
    return p;
}

} // namespace

TEST_CASE("worked instance round trips byte for byte") {
    std::string text = serialize_instance(worked_instance());
    Instance back = parse_instance(text);
    CHECK(serialize_instance(back) == text);
    CHECK(back.complex().rank(-1) == 2);
    CHECK(instance_hash(back) == instance_hash(worked_instance()));
    CHECK(instance_hash(back).size() == 64);
}

TEST_CASE("certificate round trips byte for byte") {
    Instance inst = worked_instance();
    DecompositionCertificate cert = lefschetz_decompose(inst.data);
    std::string text = serialize_certificate(cert, Z, instance_hash(inst));
    CertificateFile back = parse_certificate(text);
    CHECK(back.instance_hash == instance_hash(inst));
    CHECK(serialize_certificate(back.certificate, back.ring, back.instance_hash) == text);
    CHECK(verify_certificate(inst.complex(), back.certificate));
}

TEST_CASE("minimal zero complex") {
    std::string text = R"({"format_version": 1, "kind": "complex", "ring": {"kind": "integers"},
        "complex": {"min_degree": 0, "ranks": [], "differentials": []}})";
    ChainComplex a = parse_complex_file(text);
    CHECK(a.is_zero());
    CHECK(parse_complex_file(serialize_complex(a)).is_zero());
}

TEST_CASE("malformed matrix dimensions name the degree") {
    json j = json::parse(serialize_instance(worked_instance()));
    j["complex"]["differentials"][0]["rows"] = 2;
    j["complex"]["differentials"][0]["cols"] = 1;
    CHECK(expect_parse_error(j.dump()).find("degree -1") != std::string::npos);
    j["complex"]["differentials"][0]["cols"] = 2;
    CHECK(expect_parse_error(j.dump()).find("degree -1") != std::string::npos);

    json k = json::parse(serialize_instance(worked_instance()));
    k["complex"]["differentials"][0]["entries"][0] = "x";
    CHECK(expect_parse_error(k.dump()).find("complex.differentials[0].entries[0]") != std::string::npos);
}

TEST_CASE("parse rejects invalid data") {
    json j = json::parse(serialize_instance(worked_instance()));
    j["complex"]["differentials"][1]["entries"][0] = "1";
    // d^0 d^{-1} = [0 3] != 0
    CHECK(expect_parse_error(j.dump()).find("d^0") != std::string::npos);

    ChainComplex a(Z, -1, {1, 1, 1, 1}, {ExactMatrix(Z, 1, 1), ExactMatrix(Z, 1, 1), ExactMatrix::from_rows(Z, {{1}})});
    LefschetzMap broken = make_lefschetz_map(a, [](int k) {
        if (k == 0) return ExactMatrix::from_rows(Z, {{1}});
        return ExactMatrix();
    });
    CHECK(expect_parse_error(serialize_instance(Instance{broken})).find("lefschetz") != std::string::npos);

    CHECK(expect_parse_error("{").find("byte") != std::string::npos);
    json version = json::parse(serialize_instance(worked_instance()));
    version["format_version"] = 9;
    CHECK(expect_parse_error(version.dump()).find("format_version") != std::string::npos);
}

TEST_CASE("rational and prime field entries") {
    Ring q = Ring::rationals();
    ExactMatrix m(q, 1, 2, {Scalar(3, 2), Scalar(-1)});
    json j = matrix_to_json(m);
    CHECK(j["entries"][0] == "3/2");
    CHECK(matrix_from_json(j, q, "m") == m);
    Ring f5 = Ring::prime_field(5);
    json p = {{"rows", 1}, {"cols", 1}, {"entries", {"p:1/2"}}};
    CHECK(matrix_from_json(p, f5, "m")(0, 0) == 3);
    CHECK_THROWS_AS(matrix_from_json(p, Z, "m"), ParseError);
}

TEST_CASE("generator is deterministic") {
    std::string a = serialize_instance(generate_instance(small_profile(5)));
    CHECK(a == serialize_instance(generate_instance(small_profile(5))));
    CHECK(a != serialize_instance(generate_instance(small_profile(6))));
    GeneratorProfile r = random_profile(12, Z);
    CHECK(profile_from_json(profile_to_json(r)).shapes == r.shapes);
    CHECK(serialize_instance(generate_instance(r)) == serialize_instance(generate_instance(random_profile(12, Z))));
}

TEST_CASE("generated instances satisfy hard Lefschetz") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Instance inst = generate_instance(small_profile(seed));
        CHECK(validate(inst.complex()));
        CHECK(validate_lefschetz(inst.data));
        CHECK(hard_lefschetz_check(inst.data).ok());
        CHECK(cohomology(inst.complex(), 0).invariant_factors == std::vector<Scalar>{3});
        CHECK(cohomology(inst.complex(), 1).free_rank == 1);
    }
}

TEST_CASE("generator profile edge cases") {
    GeneratorProfile single;
    single.shapes[0] = {1, {}};
    Instance inst = generate_instance(single);
    CHECK(inst.complex().total_rank() == 1);

    GeneratorProfile split = small_profile(1);
    split.scramble_ops = 0;
    Instance plain = generate_instance(split);
    for (int k = plain.complex().min_degree(); k < plain.complex().max_degree(); ++k) {
        const ExactMatrix& d = plain.complex().differential(k);
        for (const auto& x : d.entries()) CHECK((x == 0 || x == 2 || x == 3));
    }

    GeneratorProfile asym = small_profile(1);
    asym.shapes[1] = {2, {}};
    CHECK_THROWS_AS(generate_instance(asym), std::invalid_argument);
    GeneratorProfile torsion_over_field = small_profile(1);
    torsion_over_field.ring = Ring::rationals();
    CHECK_THROWS_AS(generate_instance(torsion_over_field), std::invalid_argument);
}

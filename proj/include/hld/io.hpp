#pragma once

#include "hld/lefschetz.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace hld {

inline constexpr int kFormatVersion = 1;

struct Instance {
    LefschetzData data;
    nlohmann::json metadata = nlohmann::json::object();

    const ChainComplex& complex() const { return lefschetz_base(data); }
};

/// Canonical text: sorted keys, two-space indent, trailing newline. Every
/// matrix with entries is written, zero or not.
std::string serialize_instance(const Instance& inst);
/// Throws ParseError naming the offending field; the parsed complex and
/// Lefschetz data are validated.
Instance parse_instance(std::string_view text);
/// SHA-256 of the canonical serialization, hex encoded.
std::string instance_hash(const Instance& inst);

struct CertificateFile {
    std::string instance_hash;
    Ring ring = Ring::integers();
    DecompositionCertificate certificate;
};

std::string serialize_certificate(const DecompositionCertificate& cert, const Ring& ring, const std::string& hash);
CertificateFile parse_certificate(std::string_view text);

std::string serialize_complex(const ChainComplex& a);
ChainComplex parse_complex_file(std::string_view text);

nlohmann::json ring_to_json(const Ring& ring);
Ring ring_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json matrix_to_json(const ExactMatrix& m);
ExactMatrix matrix_from_json(const nlohmann::json& j, const Ring& ring, const std::string& where);
nlohmann::json complex_to_json(const ChainComplex& a);
ChainComplex complex_from_json(const nlohmann::json& j, const Ring& ring, const std::string& where);
nlohmann::json module_to_json(const ModulePresentation& m);

std::string dump_canonical(const nlohmann::json& j);

// -- generator ---------------------------------------------------------------

/// Cohomology of one degree: Z^free_rank ⊕ ⊕ Z/t (torsion only over the integers).
struct ModuleShape {
    std::size_t free_rank = 0;
    std::vector<long> torsion;
    friend bool operator==(const ModuleShape&, const ModuleShape&) = default;
};

enum class LefschetzMode { power, family };

struct GeneratorProfile {
    Ring ring = Ring::integers();
    int n0 = 0;
    std::map<int, ModuleShape> shapes;  // degrees in [-n0, n0], shape(-k) = shape(k)
    int scramble_ops = 0;
    std::size_t max_rank = 0;  // cap on every term after insertions; 0 = none
    std::uint64_t seed = 0;
    LefschetzMode mode = LefschetzMode::power;
    bool zero_lefschetz = false;  // negative control: Φ = 0
};

nlohmann::json profile_to_json(const GeneratorProfile& p);
GeneratorProfile profile_from_json(const nlohmann::json& j);
GeneratorProfile parse_profile(std::string_view text);

/// Split model ⊕ res(H^k)[-k] with Φ the identity along Lefschetz strings,
/// then seeded scrambling. Throws std::invalid_argument when the profile is
/// asymmetric or not realizable by strings.
Instance generate_instance(const GeneratorProfile& profile);

/// Random realizable profile: string weights up to max_n0, every term of
/// rank at most max_rank (contractible insertions included), torsion from
/// {2, 3, 4, 9} over the integers.
GeneratorProfile random_profile(std::uint64_t seed, const Ring& ring, int max_n0 = 3, std::size_t max_rank = 6,
                                int scramble_ops = 12);

} // namespace hld

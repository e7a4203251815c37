// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "hld/errors.hpp"
#include "hld/homotopy.hpp"
#include "hld/io.hpp"
#include "hld/linalg.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace hld;
using hld::testing::random_complex;
using hld::testing::random_matrix;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Per-ring run of criteria 1-4.
struct SuiteStats {
    int instances = 0;
    int verified = 0;
    int field_shape_ok = 0;
    int steps = 0;
    int alpha_ok = 0;
    int amplitude_ok = 0;
    double max_seconds = 0;
    std::vector<std::string> failures;
};

bool zero_differentials(const ChainComplex& c) {
    for (int k = c.min_degree(); k < c.max_degree(); ++k)
        if (!c.differential(k).is_zero()) return false;
    return true;
}

SuiteStats run_suite(const Ring& ring, int count) {
    SuiteStats st;
    for (int seed = 0; seed < count; ++seed) {
        ++st.instances;
        auto t0 = std::chrono::steady_clock::now();
        try {
            Instance inst = generate_instance(random_profile(static_cast<std::uint64_t>(seed), ring));
            const ChainComplex& a = inst.complex();
            DecompositionTrace trace;
            DecompositionCertificate cert = lefschetz_decompose(inst.data, &trace);
            // Round trip through the file format before checking.
            std::string hash = instance_hash(inst);
            CertificateFile file = parse_certificate(serialize_certificate(cert, ring, hash));
            Check c = verify_certificate(parse_instance(serialize_instance(inst)).complex(), file.certificate);
            if (c && file.instance_hash == hash)
                ++st.verified;
            else
                st.failures.push_back("seed " + std::to_string(seed) + ": " + c.message);

            bool shapes = true;
            for (const auto& s : cert.summands) {
                ModulePresentation h = cohomology(a, -s.k);
                if (ring.is_field() && (!zero_differentials(s.complex) || s.complex.total_rank() != h.free_rank))
                    shapes = false;
                if (!cohomology(s.complex, -s.k).isomorphic_to(h)) shapes = false;
            }
            if (shapes) ++st.field_shape_ok;

            for (const StepReport& r : trace.steps) {
                ++st.steps;
                if (r.alpha_check) ++st.alpha_ok;
                if (within(r.amplitude_c, 1, 2 * r.n) && within(r.amplitude_d, -2 * r.n + 1, -1)) ++st.amplitude_ok;
            }
        } catch (const std::exception& e) {
            st.failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        st.max_seconds = std::max(st.max_seconds, secs);
    }
    return st;
}

std::string first_failure(const SuiteStats& s) { return s.failures.empty() ? "" : "; first: " + s.failures.front(); }

Outcome criterion_end_to_end(const SuiteStats& z) {
    Outcome o;
    o.pass = z.verified == z.instances && z.field_shape_ok == z.instances && z.max_seconds < 10.0;
    std::ostringstream d;
    d << z.verified << "/" << z.instances << " integer instances verified, max " << z.max_seconds << " s"
      << first_failure(z);
    o.detail = d.str();
    return o;
}

Outcome criterion_fields(const SuiteStats& q, const SuiteStats& f) {
    Outcome o;
    o.pass = q.verified == q.instances && f.verified == f.instances && q.field_shape_ok == q.instances &&
             f.field_shape_ok == f.instances && std::max(q.max_seconds, f.max_seconds) < 10.0;
    std::ostringstream d;
    d << "Q " << q.verified << "/" << q.instances << " (minimal summands " << q.field_shape_ok << "), F_5 "
      << f.verified << "/" << f.instances << " (minimal summands " << f.field_shape_ok << ")" << first_failure(q)
      << first_failure(f);
    o.detail = d.str();
    return o;
}

Outcome criterion_alpha(const std::vector<const SuiteStats*>& all) {
    int steps = 0, ok = 0, runs = 0, completed = 0;
    for (const auto* s : all) {
        steps += s->steps;
        ok += s->alpha_ok;
        runs += s->instances;
        completed += s->instances - static_cast<int>(s->failures.size());
    }
    Outcome o;
    o.pass = steps > 0 && ok == steps && completed == runs;
    o.detail = std::to_string(ok) + "/" + std::to_string(steps) + " induction steps over " + std::to_string(runs) +
               " runs";
    return o;
}

Outcome criterion_amplitude(const std::vector<const SuiteStats*>& all) {
    int steps = 0, ok = 0;
    for (const auto* s : all) {
        steps += s->steps;
        ok += s->amplitude_ok;
    }
    Outcome o;
    o.pass = steps > 0 && ok == steps;
    o.detail = std::to_string(steps - ok) + " violations in " + std::to_string(steps) + " steps";
    return o;
}

// Free resolution 0 -> Z^r -> Z^g -> M -> 0 in degrees [-1, 0].
ChainComplex random_resolution(std::mt19937_64& rng, const Ring& ring) {
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    std::size_t g = dim(rng);
    ExactMatrix rel = image_basis(random_matrix(rng, ring, g, dim(rng), 4));
    if (rel.cols() == 0) return ChainComplex::concentrated(ring, 0, g);
    return ChainComplex(ring, -1, {rel.cols(), g}, {rel});
}

Outcome criterion_hom_vanishing() {
    std::mt19937_64 rng(2024);
    const Ring z = Ring::integers();
    int checks = 0, zero = 0, nontrivial_pairs = 0;
    for (int pair = 0; pair < 50; ++pair) {
        ChainComplex m = random_resolution(rng, z);
        ChainComplex n = random_resolution(rng, z);
        if (!cohomology(m, 0).is_zero() && !cohomology(n, 0).is_zero()) ++nontrivial_pairs;
        for (int k = 1; k <= 4; ++k) {
            ++checks;
            if (hom_k_presentation(shift(m, 2 * k), twist(n, k)).is_zero()) ++zero;
        }
    }
    Outcome o;
    o.pass = zero == checks && nontrivial_pairs > 0;
    o.detail = std::to_string(zero) + "/" + std::to_string(checks) + " zero Hom modules (" +
               std::to_string(nontrivial_pairs) + " pairs with both modules nonzero)";
    return o;
}

Outcome criterion_negative_control() {
    const Ring z = Ring::integers();
    int rejected = 0, accepted = 0, wrong_n = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorProfile p;
        for (std::uint64_t t = 0;; ++t) {
            p = random_profile(seed * 1000 + t, z);
            if (p.shapes.count(1)) break;
        }
        p.zero_lefschetz = true;
        Instance inst = generate_instance(p);
        try {
            lefschetz_decompose(inst.data);
            ++accepted;
        } catch (const HardLefschetzViolation& e) {
            if (e.n() == 1)
                ++rejected;
            else
                ++wrong_n;
        }
    }
    Outcome o;
    o.pass = rejected == 50;
    o.detail = std::to_string(rejected) + "/50 rejected at n=1, " + std::to_string(accepted) +
               " false acceptances, " + std::to_string(wrong_n) + " at another n";
    return o;
}

// Textbook Smith reduction on integer matrices, kept independent of the library.
std::vector<mpz_class> naive_invariant_factors(const ExactMatrix& m) {
    std::vector<std::vector<mpz_class>> a(m.rows(), std::vector<mpz_class>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j).get_num();
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<mpz_class> out;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
            if (pi == rows) return out;
            std::swap(a[t], a[pi]);
            for (auto& row : a) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == rows) break;
            for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad][j];
        }
        out.push_back(abs(a[t][t]));
    }
    return out;
}

Outcome criterion_oracles() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    const Ring z = Ring::integers();
    int snf_ok = 0;
    for (int t = 0; t < 500; ++t) {
        ExactMatrix m = random_matrix(rng, z, dim(rng), dim(rng), 9);
        std::vector<mpz_class> lib;
        for (const auto& d : smith_diagonal(m)) lib.push_back(d.get_num());
        SmithForm s = smith_normal_form(m);
        if (lib == naive_invariant_factors(m) && s.left * m * s.right == s.diagonal) ++snf_ok;
    }

    const Ring rings[] = {Ring::integers(), Ring::rationals(), Ring::prime_field(5)};
    int null_ok = 0;
    for (int t = 0; t < 200; ++t) {
        const Ring& r = rings[t % 3];
        ChainComplex a = random_complex(rng, r, -1, 2, 5);
        ChainComplex b = random_complex(rng, r, -2, 1, 5);
        std::map<int, ExactMatrix> h;
        for (int k = -2; k <= 3; ++k) h[k] = random_matrix(rng, r, b.rank(k - 1), a.rank(k), 3);
        ChainMap u(a, b, [&](int k) {
            return b.differential(k - 1) * h.at(k) + h.at(k + 1) * a.differential(k);
        });
        auto w = null_homotopy(u);
        if (w && check_homotopy(*w) && maps_equal(w->from(), u) && w->to().is_zero()) ++null_ok;
    }

    int inverse_ok = 0, inverse_total = 0;
    for (int t = 0; t < 50; ++t) {
        const Ring& r = rings[t % 3];
        ChainComplex a = random_complex(rng, r, -1, 2, 6);
        Minimization m = minimize(a);
        ChainComplex b = random_complex(rng, r, -1, 1, 3);
        DirectSum padded = direct_sum(a, cone(identity_map(b)).cone);
        for (const ChainMap* f : {&m.to_min, &padded.inj_a}) {
            ++inverse_total;
            auto inv = homotopy_inverse(*f);
            if (inv && check_homotopy(inv->source_side) && check_homotopy(inv->target_side)) ++inverse_ok;
        }
    }
    const Ring zz = Ring::integers();
    ChainComplex zc = ChainComplex::concentrated(zz, 0, 1);
    ChainComplex z3(zz, -1, {1, 1}, {ExactMatrix::from_rows(zz, {{3}})});
    ChainMap quotient(zc, z3, [&](int k) { return k == 0 ? ExactMatrix::from_rows(zz, {{1}}) : ExactMatrix(); });
    bool counterexample_rejected = check_chain_map(quotient) && !homotopy_inverse(quotient).has_value();

    Outcome o;
    o.pass = snf_ok == 500 && null_ok == 200 && inverse_ok == inverse_total && counterexample_rejected;
    o.detail = "SNF " + std::to_string(snf_ok) + "/500, null homotopies " + std::to_string(null_ok) +
               "/200, inverses " + std::to_string(inverse_ok) + "/" + std::to_string(inverse_total) +
               ", Z -> Z/3 " + (counterexample_rejected ? "rejected" : "NOT rejected");
    return o;
}

std::vector<std::pair<int, std::string>> summand_invariants(const DecompositionCertificate& cert) {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& s : cert.summands) out.push_back({s.k, cohomology(s.complex, -s.k).describe()});
    return out;
}

Outcome criterion_family() {
    const Ring z = Ring::integers();
    int ok = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        GeneratorProfile p = random_profile(seed + 500, z);
        try {
            Instance power = generate_instance(p);
            p.mode = LefschetzMode::family;
            Instance family = generate_instance(p);
            bool perturbed = false;
            const auto& fam = std::get<LefschetzFamily>(family.data);
            for (int n = 1; n <= static_cast<int>(fam.maps.size()); ++n)
                if (!maps_equal(fam.maps[static_cast<std::size_t>(n - 1)], lefschetz_power(power.data, n)))
                    perturbed = true;
            DecompositionCertificate cp = lefschetz_decompose(power.data);
            DecompositionCertificate cf = lefschetz_decompose(family.data);
            CertificateFile back = parse_certificate(serialize_certificate(cf, z, instance_hash(family)));
            bool same = same_terms(power.complex(), family.complex()) &&
                        summand_invariants(cp) == summand_invariants(cf);
            if (same && perturbed && verify_certificate(family.complex(), back.certificate) &&
                verify_certificate(power.complex(), cp))
                ++ok;
            else if (first.empty())
                first = "seed " + std::to_string(seed) + (perturbed ? "" : ": family equals the iterates");
        } catch (const std::exception& e) {
            if (first.empty()) first = "seed " + std::to_string(seed) + ": " + e.what();
        }
    }
    Outcome o;
    o.pass = ok == 25;
    o.detail = std::to_string(ok) + "/25 perturbed families match power mode" + (first.empty() ? "" : "; first: " + first);
    return o;
}

// Every matrix entry of a certificate, as (matrix, row, column).
struct EntryRef {
    ExactMatrix* m;
    std::size_t i, j;
};

Outcome criterion_tamper() {
    const Ring rings[] = {Ring::integers(), Ring::rationals(), Ring::prime_field(5)};
    std::mt19937_64 rng(99);
    int rejected = 0, total = 0;
    std::string first;
    for (int round = 0; round < 10; ++round) {
        const Ring& ring = rings[round % 3];
        Instance inst = generate_instance(random_profile(static_cast<std::uint64_t>(round + 900), ring));
        const ChainComplex& a = inst.complex();
        DecompositionCertificate cert = lefschetz_decompose(inst.data);
        if (!verify_certificate(a, cert)) return {false, "unmutated certificate failed to verify"};
        std::string hash = instance_hash(inst);
        std::uniform_int_distribution<int> delta_dist(1, 4);
        auto delta = [&] {
            int d = delta_dist(rng);
            return Scalar(ring.is_field() || (rng() & 1) ? d : -d);
        };

        // Five in-memory mutations of maps and homotopies.
        for (int t = 0; t < 5; ++t) {
            DecompositionCertificate c = cert;
            std::vector<EntryRef> refs;
            auto collect = [&](GradedMatrices& g) {
                for (auto& m : g.items())
                    for (std::size_t i = 0; i < m.rows(); ++i)
                        for (std::size_t j = 0; j < m.cols(); ++j) refs.push_back({&m, i, j});
            };
            for (auto& s : c.summands) {
                collect(s.ins);
                collect(s.prj);
            }
            collect(c.global);
            for (auto& p : c.pairs) collect(p.homotopy);
            EntryRef r = refs[std::uniform_int_distribution<std::size_t>(0, refs.size() - 1)(rng)];
            r.m->set(r.i, r.j, ring.add((*r.m)(r.i, r.j), delta()));
            ++total;
            if (!verify_certificate(a, c))
                ++rejected;
            else if (first.empty())
                first = "in-memory mutation accepted";
        }

        // Five mutations of the serialized file, summand differentials included.
        json j = json::parse(serialize_certificate(cert, ring, hash));
        std::vector<json::json_pointer> entries;
        std::function<void(const json&, const json::json_pointer&)> walk = [&](const json& v,
                                                                              const json::json_pointer& ptr) {
            if (v.is_object()) {
                for (auto it = v.begin(); it != v.end(); ++it) {
                    if (it.key() == "entries")
                        for (std::size_t i = 0; i < it->size(); ++i) entries.push_back(ptr / "entries" / i);
                    else
                        walk(*it, ptr / it.key());
                }
            } else if (v.is_array()) {
                for (std::size_t i = 0; i < v.size(); ++i) walk(v[i], ptr / i);
            }
        };
        walk(j, json::json_pointer());
        for (int t = 0; t < 5; ++t) {
            json mutated = j;
            const json::json_pointer& p = entries[std::uniform_int_distribution<std::size_t>(0, entries.size() - 1)(rng)];
            Scalar v = ring.add(ring.parse(mutated[p].get<std::string>()), delta());
            mutated[p] = ring.format(v);
            ++total;
            bool caught = false;
            try {
                CertificateFile f = parse_certificate(mutated.dump());
                caught = f.instance_hash != hash || !verify_certificate(a, f.certificate);
            } catch (const ParseError&) {
                caught = true;  // e.g. a summand differential with d∘d != 0
            }
            if (caught)
                ++rejected;
            else if (first.empty())
                first = "file mutation at " + p.to_string() + " accepted";
        }
    }
    Outcome o;
    o.pass = rejected == total && total == 100;
    o.detail = std::to_string(rejected) + "/" + std::to_string(total) + " mutations rejected" +
               (first.empty() ? "" : "; first: " + first);
    return o;
}

} // namespace

int main() {
    SuiteStats z = run_suite(Ring::integers(), 100);
    SuiteStats q = run_suite(Ring::rationals(), 100);
    SuiteStats f = run_suite(Ring::prime_field(5), 100);
    std::vector<const SuiteStats*> all = {&z, &q, &f};

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"integer instances decompose and verify", [&] { return criterion_end_to_end(z); }},
        {"Q and F_5 instances decompose to minimal summands", [&] { return criterion_fields(q, f); }},
        {"alpha agrees with H^0 of the iterate at every step", [&] { return criterion_alpha(all); }},
        {"cone amplitudes stay in [1,2n] and [-2n+1,-1]", [&] { return criterion_amplitude(all); }},
        {"Hom from shifted H^-n to H^n vanishes", criterion_hom_vanishing},
        {"zero Lefschetz map is rejected at n=1", criterion_negative_control},
        {"linear algebra and homotopy oracles agree", criterion_oracles},
        {"perturbed Lefschetz families match power mode", criterion_family},
        {"single-entry certificate mutations are rejected", criterion_tamper},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}

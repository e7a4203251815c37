#include "hld/lefschetz.hpp"

#include "hld/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace hld {

namespace {

std::function<ExactMatrix(int)> zero_filled(const std::function<ExactMatrix(int)>& component, const ComplexPtr& src,
                                            const ComplexPtr& tgt) {
    return [=](int k) {
        ExactMatrix m = component(k);
        if (m.rows() == 0 && m.cols() == 0) return ExactMatrix(src->ring(), tgt->rank(k), src->rank(k));
        return m;
    };
}

ChainMap sum_of(const ChainMap& a, const std::optional<ChainMap>& b) { return b ? add(*b, a) : a; }

} // namespace

// -- Lefschetz data --------------------------------------------------------------

ChainMap make_family_member(const ComplexPtr& a, int n, const std::function<ExactMatrix(int)>& component) {
    auto src = share(shift(*a, -n));
    auto tgt = share(twist(shift(*a, n), n));
    return ChainMap(src, tgt, zero_filled(component, src, tgt));
}

LefschetzMap make_lefschetz_map(const ChainComplex& a, const std::function<ExactMatrix(int)>& component) {
    auto pa = share(a);
    return {pa, make_family_member(pa, 1, component)};
}

const ChainComplex& lefschetz_base(const LefschetzData& data) {
    return std::visit([](const auto& d) -> const ChainComplex& { return *d.base; }, data);
}

Check validate_lefschetz(const LefschetzData& data) {
    if (const auto* m = std::get_if<LefschetzMap>(&data)) {
        if (Check c = check_chain_map(m->phi); !c)
            return Check::fail(c.degree, "Lefschetz map: " + c.message);
        return Check::pass();
    }
    const auto& fam = std::get<LefschetzFamily>(data);
    for (std::size_t i = 0; i < fam.maps.size(); ++i)
        if (Check c = check_chain_map(fam.maps[i]); !c)
            return Check::fail(c.degree, "family member n=" + std::to_string(i + 1) + ": " + c.message);
    return Check::pass();
}

ChainMap iterate_lefschetz(const LefschetzMap& phi, int n) {
    if (n < 1) throw std::invalid_argument("iterate_lefschetz: n must be positive");
    ChainMap result = shift_map(phi.phi, -n + 1);
    for (int j = -n + 3; j <= n - 1; j += 2) result = compose(shift_map(phi.phi, j), result);
    const ChainComplex& a = *phi.base;
    return retarget(result, share(shift(a, -n)), share(twist(shift(a, n), n)));
}

ChainMap lefschetz_power(const LefschetzData& data, int n) {
    if (const auto* m = std::get_if<LefschetzMap>(&data)) return iterate_lefschetz(*m, n);
    const auto& fam = std::get<LefschetzFamily>(data);
    if (n >= 1 && static_cast<std::size_t>(n) <= fam.maps.size()) return fam.maps[static_cast<std::size_t>(n - 1)];
    return make_family_member(fam.base, n, [](int) { return ExactMatrix(); });
}

int amplitude_bound(const ChainComplex& a) {
    DegreeRange amp = amplitude(a);
    if (amp.empty()) return 0;
    return std::max(std::abs(amp.lo), std::abs(amp.hi));
}

bool HardLefschetzReport::ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.iso; });
}

int HardLefschetzReport::first_failure() const {
    for (const auto& e : entries)
        if (!e.iso) return e.n;
    return 0;
}

HardLefschetzReport hard_lefschetz_check(const LefschetzData& data) {
    HardLefschetzReport report;
    const int n0 = amplitude_bound(lefschetz_base(data));
    for (int n = 1; n <= n0; ++n) {
        ChainMap psi = lefschetz_power(data, n);
        CohomologyGroup src = cohomology_group(psi.source(), 0);
        CohomologyGroup dst = cohomology_group(psi.target(), 0);
        bool iso = module_map_is_iso(induced_map(psi, 0, src, dst), src.module, dst.module);
        report.entries.push_back({n, src.module, dst.module, iso});
    }
    return report;
}

// -- the induction ----------------------------------------------------------------

InductionState initial_state(const LefschetzData& data) {
    const ChainComplex& a = lefschetz_base(data);
    auto pa = share(a);
    ChainMap id = identity_map(pa);
    ChainMap none = zero_map(pa, pa);
    Homotopy global = relabel(Homotopy::zero(id), add(none, compose(id, id)), id);
    return {amplitude_bound(a), pa, a, id, id, Homotopy::zero(compose(id, id)), {}, none, global};
}

Alpha build_alpha(const InductionState& state, const LefschetzData& data, int n) {
    BottomTruncation bt = bottom_truncation_model(state.a_n, n);
    TopTruncation et = top_truncation_model(state.a_n, n);
    ChainMap u = shift_map(bt.inclusion, -n);
    ChainMap v = shift_map(et.projection, n);
    ChainMap psi = lefschetz_power(data, n);
    ChainMap i_shift = shift_map(state.i_n, -n);
    ChainMap p_shift = shift_map(state.p_n, n);
    ChainMap core = compose(p_shift, compose(psi, i_shift));
    ChainMap f1 = compose(core, u);
    ChainMap r1 = compose(v, core);
    ChainMap alpha = compose(v, f1);
    alpha = retarget(alpha, alpha.source_ptr(), share(twist(alpha.target(), n)));

    CohomologyGroup g_t = cohomology_group(u.source(), 0);
    CohomologyGroup g_an_lo = cohomology_group(u.target(), 0);
    CohomologyGroup g_a_lo = cohomology_group(psi.source(), 0);
    CohomologyGroup g_a_hi = cohomology_group(psi.target(), 0);
    CohomologyGroup g_an_hi = cohomology_group(v.source(), 0);
    CohomologyGroup g_e = cohomology_group(v.target(), 0);
    ExactMatrix direct = induced_map(alpha, 0, g_t, g_e);
    ExactMatrix through = induced_map(v, 0, g_an_hi, g_e) * induced_map(p_shift, 0, g_a_hi, g_an_hi) *
                          induced_map(psi, 0, g_a_lo, g_a_hi) * induced_map(i_shift, 0, g_an_lo, g_a_lo) *
                          induced_map(u, 0, g_t, g_an_lo);
    bool check = module_maps_equal(direct, through, g_e.module);
    return {bt.complex, et.complex, u, v, f1, r1, alpha, check};
}

namespace {

struct Piece {
    ChainMap ins;  // piece -> A_n
    ChainMap prj;  // A_n -> piece
};

} // namespace

InductionState induction_step(const InductionState& state, const LefschetzData& data, StepReport* report) {
    const int n = state.n;
    if (n < 1) throw std::invalid_argument("induction_step: n must be positive");
    if (!within(amplitude(state.a_n), -n, n))
        throw InternalWitnessFailure("A_" + std::to_string(n) + " has cohomology outside [-n, n]");
    const std::size_t rank_in = state.a_n.total_rank();

    Alpha al = build_alpha(state, data, n);
    auto inv = homotopy_inverse(al.alpha);
    if (!inv) throw HardLefschetzViolation(n);
    const ChainMap& beta = inv->inverse;

    // A_n[-n] ≅ T[-n] ⊕ C with C ∈ [1, 2n].
    ChainMap g1 = compose(beta, al.r1);
    Homotopy w1 = relabel(inv->source_side, compose(g1, al.u), identity_map(al.u.source_ptr()));
    SplitData s1 = split_with_retraction(al.u, g1, w1);
    DegreeRange amp_c = amplitude(s1.complement);
    if (!within(amp_c, 1, 2 * n)) throw InternalWitnessFailure("complement C has cohomology outside [1, 2n]");

    // The T-summand cannot reach E[n]; α factors through C[2n].
    ChainMap vanishing = compose(al.v, shift_map(s1.iota, 2 * n));
    if (!null_homotopy(vanishing)) throw InternalWitnessFailure("T[n] -> E[n] is not null-homotopic");
    ChainMap b = compose(shift_map(s1.pi_c, 2 * n), al.f1);
    ChainMap b_prime = compose(al.v, shift_map(s1.iota_c, 2 * n));
    Homotopy h_alpha = relabel(whisker(al.v, shift_homotopy(s1.sum, 2 * n), al.f1), compose(b_prime, b), al.alpha);

    // C[2n] ≅ E[n] ⊕ D with D ∈ [-2n+1, -1].
    ChainMap s = compose(b, beta);
    Homotopy w2 = concat(relabel(whisker_right(h_alpha, beta), compose(b_prime, s), inv->target_side.from()),
                         inv->target_side);
    SplitData s2 = split_with_retraction(s, b_prime, w2);
    DegreeRange amp_d = amplitude(s2.complement);
    if (!within(amp_d, -2 * n + 1, -1)) throw InternalWitnessFailure("complement D has cohomology outside [-2n+1, -1]");

    // Three pieces of A_n[-n].
    ChainMap iota_e = shift_map(s2.iota, -2 * n), pi_e = shift_map(s2.pi, -2 * n);
    ChainMap iota_d = shift_map(s2.iota_c, -2 * n), pi_d = shift_map(s2.pi_c, -2 * n);
    Piece t_piece{s1.iota, s1.pi};
    Piece e_piece{compose(s1.iota_c, iota_e), compose(pi_e, s1.pi_c)};
    Piece d_piece{compose(s1.iota_c, iota_d), compose(pi_d, s1.pi_c)};
    ChainMap sum3 = add(add(compose(t_piece.ins, t_piece.prj), compose(e_piece.ins, e_piece.prj)),
                        compose(d_piece.ins, d_piece.prj));
    Homotopy l_inner = add_constant(whisker(s1.iota_c, shift_homotopy(s2.sum, -2 * n), s1.pi_c),
                                    compose(s1.iota, s1.pi));
    Homotopy l = concat(relabel(l_inner, sum3, s1.sum.from()), s1.sum);
    Homotopy d_retract = concat(whisker(pi_d, s1.pic_iotac, iota_d), shift_homotopy(s2.pic_iotac, -2 * n));

    // Back to A_n coordinates.
    auto to_a_n = [n](const Piece& p) { return Piece{shift_map(p.ins, n), shift_map(p.prj, n)}; };
    Piece pieces[3] = {to_a_n(t_piece), to_a_n(e_piece), to_a_n(d_piece)};
    Homotopy l_a_n = shift_homotopy(l, n);
    Homotopy d_retract_a_n = shift_homotopy(d_retract, n);

    InductionState next{n - 1, state.base, ChainComplex(state.a_n.ring()), state.i_n, state.p_n, state.witness,
                        state.finished, state.finished_sum, state.global};

    std::optional<Homotopy> h_pieces;
    ChainMap new_terms = zero_map(state.base, state.base);
    const int weights[3] = {n, 0, 0};
    const int ks[3] = {n, -n, 0};
    std::optional<Minimization> d_min;
    for (int q = 0; q < 3; ++q) {
        const Piece& p = pieces[q];
        Minimization m = minimize(p.ins.source());
        ChainMap outer_ins = compose(state.i_n, p.ins);
        ChainMap outer_prj = compose(p.prj, state.p_n);
        ChainMap ins = compose(outer_ins, m.from_min);
        ChainMap prj = compose(m.to_min, outer_prj);
        Homotopy h = whisker(outer_ins, m.witness, outer_prj);
        h_pieces = h_pieces ? add(*h_pieces, h) : h;
        new_terms = add(new_terms, compose(ins, prj));
        if (q < 2) {
            next.finished_sum = add(next.finished_sum, compose(ins, prj));
            if (!m.complex.is_zero()) {
                ChainComplex r = m.complex.with_twist_weight(weights[q]);
                auto pr = share(r);
                next.finished.push_back({ks[q], r, retarget(ins, pr, ins.target_ptr()),
                                         retarget(prj, prj.source_ptr(), pr)});
            }
        } else {
            next.a_n = m.complex;
            next.i_n = ins;
            next.p_n = prj;
            d_min = std::move(m);
        }
    }

    // Σ_new ~ Σ_old + i_n (Σ pieces) p_n ~ Σ_old + i_n p_n ~ id_A.
    Homotopy through_pieces = add_constant(*h_pieces, state.finished_sum);
    Homotopy through_split = add_constant(whisker(state.i_n, l_a_n, state.p_n), state.finished_sum);
    Homotopy chain = concat(concat(relabel(through_pieces, through_pieces.from(), through_split.from()),
                                   through_split),
                            relabel(state.global, through_split.to(), state.global.to()));
    next.global = relabel(chain, add(next.finished_sum, compose(next.i_n, next.p_n)), identity_map(state.base));

    // p_{n-1} i_{n-1} ~ id.
    const Piece& dp = pieces[2];
    Homotopy wa = whisker(compose(d_min->to_min, dp.prj), state.witness, compose(dp.ins, d_min->from_min));
    Homotopy wb = whisker(d_min->to_min, d_retract_a_n, d_min->from_min);
    next.witness = relabel(concat(wa, wb), compose(next.p_n, next.i_n), identity_map(next.i_n.source_ptr()));

    if (report) *report = {n, al.check, amp_c, amp_d, rank_in, next.a_n.total_rank()};
    return next;
}

// -- decomposition and certificates --------------------------------------------------

namespace {

ChainMap map_from(const GradedMatrices& g, const ComplexPtr& src, const ComplexPtr& tgt) {
    return ChainMap(src, tgt, [&](int k) { return g(k); });
}

} // namespace

DecompositionCertificate lefschetz_decompose(const LefschetzData& data, DecompositionTrace* trace) {
    const ChainComplex& a = lefschetz_base(data);
    if (Check c = validate(a); !c) throw InvalidComplex(c.message);
    if (Check c = validate_lefschetz(data); !c) throw InvalidLefschetzData(c.message);
    HardLefschetzReport hl = hard_lefschetz_check(data);
    if (!hl.ok()) throw HardLefschetzViolation(hl.first_failure());

    InductionState state = initial_state(data);
    if (trace) *trace = {state.n, {}};
    while (state.n >= 1) {
        StepReport report{};
        state = induction_step(state, data, &report);
        if (trace) trace->steps.push_back(report);
    }
    if (!within(amplitude(state.a_n), 0, 0)) throw InternalWitnessFailure("A_0 has cohomology outside degree 0");
    std::vector<FinishedSummand> finished = state.finished;
    Homotopy global = state.global;
    if (!state.a_n.is_zero()) {
        Minimization m = minimize(state.a_n);
        ChainMap ins = compose(state.i_n, m.from_min);
        ChainMap prj = compose(m.to_min, state.p_n);
        // Σ + i f t p ~ Σ + i p ~ id_A.
        Homotopy through_min = add_constant(whisker(state.i_n, m.witness, state.p_n), state.finished_sum);
        global = relabel(concat(through_min, relabel(state.global, through_min.to(), state.global.to())),
                         add(state.finished_sum, compose(ins, prj)), state.global.to());
        if (!m.complex.is_zero()) {
            auto pr = share(m.complex.with_twist_weight(0));
            finished.push_back({0, *pr, retarget(ins, pr, ins.target_ptr()), retarget(prj, prj.source_ptr(), pr)});
        }
    }
    std::sort(finished.begin(), finished.end(),
              [](const FinishedSummand& x, const FinishedSummand& y) { return x.k < y.k; });

    DecompositionCertificate cert;
    for (const auto& f : finished)
        cert.summands.push_back({f.k, f.complex.twist_weight(), f.complex, f.ins.components(), f.prj.components()});
    cert.global = canonicalize(global).components();
    for (std::size_t j = 0; j < finished.size(); ++j) {
        for (std::size_t k = 0; k < finished.size(); ++k) {
            ChainMap composite = compose(finished[j].prj, finished[k].ins);
            ChainMap expected = j == k ? identity_map(composite.source_ptr())
                                       : zero_map(composite.source_ptr(), composite.target_ptr());
            auto h = null_homotopy(subtract(composite, expected));
            if (!h) throw InternalWitnessFailure("summands " + std::to_string(j) + ", " + std::to_string(k) +
                                                 " are not orthogonal up to homotopy");
            Homotopy w(composite, expected, [&](int d) { return (*h)(d); });
            cert.pairs.push_back({j, k, canonicalize(w).components()});
        }
    }
    if (Check c = verify_certificate(a, cert); !c) throw InternalWitnessFailure("certificate: " + c.message);
    return cert;
}

Check verify_certificate(const ChainComplex& a, const DecompositionCertificate& cert, bool parallel) {
    if (Check c = validate(a); !c) return Check::fail(c.degree, "instance complex: " + c.message);
    auto pa = share(a);
    const std::size_t count = cert.summands.size();
    std::vector<ComplexPtr> rs;
    std::vector<std::optional<ChainMap>> ins(count), prj(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& s = cert.summands[i];
        rs.push_back(share(s.complex));
        try {
            ins[i] = map_from(s.ins, rs[i], pa);
            prj[i] = map_from(s.prj, pa, rs[i]);
        } catch (const std::exception& e) {
            return Check::fail(s.k, "summand k=" + std::to_string(s.k) + ": " + e.what());
        }
    }

    std::vector<std::function<Check()>> tasks;
    // Coverage: one summand per nonzero cohomology group, distinct k.
    tasks.emplace_back([&]() -> Check {
        std::vector<int> ks;
        for (const auto& s : cert.summands) ks.push_back(s.k);
        std::vector<int> sorted = ks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return Check::fail(0, "two summands share the same k");
        if (a.is_zero()) return Check::pass();
        for (int j = a.min_degree(); j <= a.max_degree(); ++j)
            if (!cohomology(a, j).is_zero() && std::find(ks.begin(), ks.end(), -j) == ks.end())
                return Check::fail(j, "H^" + std::to_string(j) + "(A) is nonzero but has no summand");
        return Check::pass();
    });
    for (std::size_t i = 0; i < count; ++i) {
        tasks.emplace_back([&, i]() -> Check {
            const auto& s = cert.summands[i];
            const std::string name = "summand k=" + std::to_string(s.k) + ": ";
            if (Check c = validate(s.complex); !c) return Check::fail(c.degree, name + c.message);
            if (s.twist_weight != s.complex.twist_weight() || s.twist_weight != std::max(s.k, 0))
                return Check::fail(s.k, name + "twist weight " + std::to_string(s.twist_weight) +
                                            " does not match the shift " + std::to_string(s.k));
            if (Check c = check_chain_map(*ins[i]); !c) return Check::fail(c.degree, name + "ins: " + c.message);
            if (Check c = check_chain_map(*prj[i]); !c) return Check::fail(c.degree, name + "prj: " + c.message);
            if (!s.complex.is_zero())
                for (int j = s.complex.min_degree(); j <= s.complex.max_degree(); ++j)
                    if (j != -s.k && !cohomology(s.complex, j).is_zero())
                        return Check::fail(j, name + "cohomology in degree " + std::to_string(j));
            if (!cohomology(s.complex, -s.k).isomorphic_to(cohomology(a, -s.k)))
                return Check::fail(-s.k, name + "H^" + std::to_string(-s.k) + " differs from that of A");
            return Check::pass();
        });
    }
    tasks.emplace_back([&]() -> Check {
        std::optional<ChainMap> total;
        for (std::size_t i = 0; i < count; ++i) total = sum_of(compose(*ins[i], *prj[i]), total);
        ChainMap from = total ? *total : zero_map(pa, pa);
        if (Check c = check_canonical(a, a, cert.global); !c) return Check::fail(c.degree, "global witness: " + c.message);
        if (Check c = check_homotopy_between(from, identity_map(pa), cert.global); !c)
            return Check::fail(c.degree, "global witness sum ins∘prj ~ id: " + c.message);
        return Check::pass();
    });
    tasks.emplace_back([&]() -> Check {
        if (cert.pairs.size() != count * count) return Check::fail(0, "pairwise witnesses incomplete");
        for (std::size_t j = 0; j < count; ++j)
            for (std::size_t k = 0; k < count; ++k)
                if (cert.pairs[j * count + k].j != j || cert.pairs[j * count + k].k != k)
                    return Check::fail(0, "pairwise witnesses out of order");
        return Check::pass();
    });
    for (std::size_t q = 0; q < cert.pairs.size() && cert.pairs.size() == count * count; ++q) {
        tasks.emplace_back([&, q]() -> Check {
            const PairWitness& w = cert.pairs[q];
            const std::string name = "prj_" + std::to_string(cert.summands[w.j].k) + "∘ins_" +
                                     std::to_string(cert.summands[w.k].k) + (w.j == w.k ? " ~ id" : " ~ 0");
            ChainMap composite = compose(*prj[w.j], *ins[w.k]);
            ChainMap expected = w.j == w.k ? identity_map(rs[w.k]) : zero_map(rs[w.k], rs[w.j]);
            if (Check c = check_canonical(*rs[w.k], *rs[w.j], w.homotopy); !c)
                return Check::fail(c.degree, name + ": " + c.message);
            if (Check c = check_homotopy_between(composite, expected, w.homotopy); !c)
                return Check::fail(c.degree, name + ": " + c.message);
            return Check::pass();
        });
    }

    std::vector<Check> results(tasks.size());
    const long n_tasks = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long t = 0; t < n_tasks; ++t) {
        try {
            results[static_cast<std::size_t>(t)] = tasks[static_cast<std::size_t>(t)]();
        } catch (const std::exception& e) {
            results[static_cast<std::size_t>(t)] = Check::fail(0, e.what());
        }
    }
    for (const auto& r : results)
        if (!r) return r;
    return Check::pass();
}

} // namespace hld

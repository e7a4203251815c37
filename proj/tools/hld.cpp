// Command-line front end: check, cohomology, decompose, verify, hom,
// minimize, generate.

#include "hld/errors.hpp"
#include "hld/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hld;

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kInputError = 2;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

Instance load_instance(const std::string& path) {
    try {
        return parse_instance(read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit(bool as_json, const json& report, const std::string& text) {
    if (as_json)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_check(const std::string& path, bool as_json) {
    Instance inst = load_instance(path);
    HardLefschetzReport r = hard_lefschetz_check(inst.data);
    json entries = json::array();
    std::ostringstream text;
    text << "complex: " << inst.complex().describe() << "\n";
    for (const auto& e : r.entries) {
        entries.push_back({{"n", e.n},
                           {"pass", e.iso},
                           {"negative", module_to_json(e.negative)},
                           {"positive", module_to_json(e.positive)}});
        text << "n=" << e.n << " " << (e.iso ? "PASS" : "FAIL") << "  H^" << -e.n << " = " << e.negative.describe()
             << "  H^" << e.n << " = " << e.positive.describe() << "\n";
    }
    if (r.entries.empty()) text << "no n to check (amplitude within [0, 0])\n";
    emit(as_json, {{"command", "check"}, {"hard_lefschetz", entries}, {"pass", r.ok()}}, text.str());
    return r.ok() ? kOk : kMathFailure;
}

int cmd_cohomology(const std::string& path, bool as_json) {
    Instance inst = load_instance(path);
    const ChainComplex& a = inst.complex();
    json groups = json::array();
    std::ostringstream text;
    for (int k = a.min_degree(); k <= a.max_degree() && !a.is_zero(); ++k) {
        ModulePresentation h = cohomology(a, k);
        json g = module_to_json(h);
        g["degree"] = k;
        groups.push_back(g);
        text << "H^" << k << " = " << h.describe() << "\n";
    }
    emit(as_json, {{"command", "cohomology"}, {"groups", groups}}, text.str());
    return kOk;
}

int cmd_decompose(const std::string& path, const std::string& out, bool as_json) {
    Instance inst = load_instance(path);
    DecompositionTrace trace;
    DecompositionCertificate cert;
    try {
        cert = lefschetz_decompose(inst.data, &trace);
    } catch (const HardLefschetzViolation& e) {
        if (as_json)
            std::cout << json{{"command", "decompose"}, {"error", e.what()}, {"n", e.n()}}.dump(2) << "\n";
        std::cerr << e.what() << "\n";
        return kMathFailure;
    }
    write_file(out, serialize_certificate(cert, inst.complex().ring(), instance_hash(inst)));
    json steps = json::array();
    std::ostringstream text;
    for (const auto& s : trace.steps) {
        steps.push_back({{"n", s.n}, {"alpha_check", s.alpha_check}, {"rank_in", s.rank_a_n}, {"rank_out", s.rank_next}});
        text << "step n=" << s.n << ": alpha check " << (s.alpha_check ? "ok" : "FAILED") << ", rank " << s.rank_a_n
             << " -> " << s.rank_next << "\n";
    }
    json summands = json::array();
    for (const auto& s : cert.summands) {
        summands.push_back({{"k", s.k},
                            {"twist_weight", s.twist_weight},
                            {"cohomology", module_to_json(cohomology(s.complex, -s.k))}});
        text << "R_" << s.k << " = " << s.complex.describe() << "  (H^" << -s.k << " = "
             << cohomology(s.complex, -s.k).describe() << ", twist " << s.twist_weight << ")\n";
    }
    text << "certificate written to " << out << "\n";
    emit(as_json, {{"command", "decompose"}, {"n0", trace.n0}, {"steps", steps}, {"summands", summands}, {"output", out}},
         text.str());
    return kOk;
}

struct VerifyOutcome {
    int code;
    std::string message;
};

VerifyOutcome verify_pair(const std::string& instance_path, const std::string& cert_path) {
    try {
        Instance inst = load_instance(instance_path);
        CertificateFile cf;
        try {
            cf = parse_certificate(read_file(cert_path));
        } catch (const ParseError& e) {
            return {kInputError, cert_path + ": " + e.what()};
        }
        if (cf.instance_hash != instance_hash(inst))
            return {kInputError, "certificate was issued for a different instance (hash mismatch)"};
        if (!(cf.ring == inst.complex().ring())) return {kInputError, "certificate ring differs from the instance ring"};
        Check c = verify_certificate(inst.complex(), cf.certificate);
        if (!c) return {kMathFailure, "FAIL: " + c.message};
        return {kOk, "PASS"};
    } catch (const InputError& e) {
        return {kInputError, e.what()};
    }
}

int cmd_verify(const std::string& instance_path, const std::string& cert_path, bool as_json) {
    VerifyOutcome v = verify_pair(instance_path, cert_path);
    emit(as_json, {{"command", "verify"}, {"pass", v.code == kOk}, {"message", v.message}}, v.message + "\n");
    return v.code;
}

int cmd_verify_all(const std::string& dir, bool as_json) {
    if (!fs::is_directory(dir)) throw InputError(dir + " is not a directory");
    std::vector<std::string> names;
    const std::string suffix = ".cert.json";
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string f = entry.path().filename().string();
        if (f.size() > suffix.size() && f.ends_with(suffix)) names.push_back(f.substr(0, f.size() - suffix.size()));
    }
    std::sort(names.begin(), names.end());
    std::vector<VerifyOutcome> results(names.size());
    const long count = static_cast<long>(names.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        const std::string& n = names[static_cast<std::size_t>(i)];
        results[static_cast<std::size_t>(i)] =
            verify_pair((fs::path(dir) / (n + ".json")).string(), (fs::path(dir) / (n + suffix)).string());
    }
    int code = kOk;
    json items = json::array();
    std::ostringstream text;
    for (std::size_t i = 0; i < names.size(); ++i) {
        code = std::max(code, results[i].code);
        items.push_back({{"name", names[i]}, {"pass", results[i].code == kOk}, {"message", results[i].message}});
        text << names[i] << ": " << results[i].message << "\n";
    }
    text << names.size() << " certificates, " << (code == kOk ? "all pass" : "some failed") << "\n";
    emit(as_json, {{"command", "verify"}, {"results", items}, {"pass", code == kOk}}, text.str());
    return code;
}

ChainComplex load_complex(const std::string& path) {
    try {
        return parse_complex_file(read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

int cmd_hom(const std::string& a_path, const std::string& b_path, bool as_json) {
    ChainComplex a = load_complex(a_path);
    ChainComplex b = load_complex(b_path);
    if (!(a.ring() == b.ring())) throw InputError("the two complexes live over different rings");
    ModulePresentation h = hom_k_presentation(a, b);
    emit(as_json, {{"command", "hom"}, {"module", module_to_json(h)}}, "Hom_K(A, B) = " + h.describe() + "\n");
    return kOk;
}

int cmd_minimize(const std::string& path, const std::string& out, bool as_json) {
    Instance inst = load_instance(path);
    Minimization m = minimize(inst.complex());
    write_file(out, serialize_complex(m.complex));
    emit(as_json,
         {{"command", "minimize"}, {"ranks", m.complex.ranks()}, {"min_degree", m.complex.min_degree()}, {"output", out}},
         "minimal complex: " + m.complex.describe() + "\nwritten to " + out + "\n");
    return kOk;
}

int cmd_generate(const std::string& profile_path, std::optional<std::uint64_t> seed, const std::string& out,
                 bool as_json) {
    GeneratorProfile p;
    try {
        p = parse_profile(read_file(profile_path));
    } catch (const ParseError& e) {
        throw InputError(profile_path + ": " + e.what());
    }
    if (seed) p.seed = *seed;
    auto generated = [&] {
        try {
            return generate_instance(p);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    };
    Instance inst = generated();
    write_file(out, serialize_instance(inst));
    emit(as_json, {{"command", "generate"}, {"output", out}, {"hash", instance_hash(inst)}},
         "instance written to " + out + " (" + inst.complex().describe() + ")\n");
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hard Lefschetz decomposition of bounded free complexes"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string instance, cert, out, other, all_dir, profile;
    std::optional<std::uint64_t> seed;

    auto* check = app.add_subcommand("check", "validate an instance and report hard Lefschetz per n");
    check->add_option("instance", instance)->required();
    auto* coh = app.add_subcommand("cohomology", "per-degree cohomology of the instance complex");
    coh->add_option("instance", instance)->required();
    auto* dec = app.add_subcommand("decompose", "run the decomposition and write a certificate");
    dec->add_option("instance", instance)->required();
    dec->add_option("-o,--output", out)->required();
    auto* ver = app.add_subcommand("verify", "check a certificate against its instance");
    ver->add_option("instance", instance);
    ver->add_option("certificate", cert);
    ver->add_option("--all", all_dir, "verify every NAME.cert.json against NAME.json in a directory");
    auto* hom = app.add_subcommand("hom", "Hom in the homotopy category between two complexes");
    hom->add_option("a", instance)->required();
    hom->add_option("b", other)->required();
    auto* mini = app.add_subcommand("minimize", "write a minimal homotopy-equivalent complex");
    mini->add_option("instance", instance)->required();
    mini->add_option("-o,--output", out)->required();
    auto* gen = app.add_subcommand("generate", "generate a seeded instance from a profile");
    gen->add_option("--seed", seed);
    gen->add_option("--profile", profile)->required();
    gen->add_option("-o,--output", out)->required();
    for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (check->parsed()) return cmd_check(instance, as_json);
        if (coh->parsed()) return cmd_cohomology(instance, as_json);
        if (dec->parsed()) return cmd_decompose(instance, out, as_json);
        if (ver->parsed()) {
            if (!all_dir.empty()) return cmd_verify_all(all_dir, as_json);
            if (instance.empty() || cert.empty()) throw InputError("verify needs <instance> <certificate> or --all <dir>");
            return cmd_verify(instance, cert, as_json);
        }
        if (hom->parsed()) return cmd_hom(instance, other, as_json);
        if (mini->parsed()) return cmd_minimize(instance, out, as_json);
        if (gen->parsed()) return cmd_generate(profile, seed, out, as_json);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InternalWitnessFailure& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kMathFailure;
    }
    return kInputError;
}

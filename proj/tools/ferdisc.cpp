// ferdisc: decide, construct and simulate LOCC discrimination protocols for
// pairs of pure bipartite Fermionic states.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ferdisc/decomp.hpp"
#include "ferdisc/discrim.hpp"
#include "ferdisc/errors.hpp"
#include "ferdisc/fock.hpp"
#include "ferdisc/oracle.hpp"
#include "ferdisc/protocol.hpp"
#include "ferdisc/statefile.hpp"
#include "ferdisc/sweep.hpp"

using json = nlohmann::ordered_json;
using namespace ferdisc;

namespace {

constexpr std::uint64_t kDefaultSeed = 314159;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string fmt(cplx z) { return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i"; }

struct CommonOptions {
    std::string in_path;
    double tol = kDefaultTol;
    bool tol_given = false;
    std::string ancilla; // "", "max" or "a,b"
    std::string format = "text";
    double prior = 0.5;
    std::uint64_t seed = kDefaultSeed;
};

void add_tol_option(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--tol", opt.tol, "Tolerance for zero tests (default 1e-10, or FERDISC_TOL)")
        ->check(CLI::PositiveNumber)
        ->each([&opt](const std::string&) { opt.tol_given = true; });
}

void apply_env_tol(CommonOptions& opt) {
    if (opt.tol_given) return;
    if (const char* env = std::getenv("FERDISC_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0))
            throw ValidationError("FERDISC_TOL must be a positive number");
        opt.tol = v;
    }
}

struct StatePair {
    StateFile file; // as parsed, for --dump round-trips
    FockVector psi;
    FockVector phi;
};

// Rounded decimal inputs are renormalized silently; anything further from
// unit norm than 1e-3 is treated as a mistake.
FockVector ensure_normalized(const FockVector& v, const std::string& name) {
    const double n = v.norm();
    if (std::abs(n - 1.0) <= kAmplitudeTol) return v;
    if (std::abs(n - 1.0) > 1e-3)
        throw ValidationError("state '" + name + "' has norm " + fmt(n) +
                              "; amplitudes must be normalized");
    FockVector out = v;
    out.amplitudes = scaled(out.amplitudes, 1.0 / n);
    return out;
}

cplx parse_real_pair_as_complex(const std::string& text) {
    // a single real, or "re,im"
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return cplx(std::stod(text), 0.0);
        return cplx(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
        throw ValidationError("cannot parse number '" + text + "'");
    }
}

StatePair load_pair(const CommonOptions& opt) {
    if (opt.in_path.empty()) throw ValidationError("missing --in <state file>");
    StatePair pair{load_state_file(opt.in_path), {}, {}};
    const auto& states = pair.file.states;

    const FockVector* psi = nullptr;
    const FockVector* phi = nullptr;
    for (const auto& ns : states) {
        if (ns.name == "psi") psi = &ns.state;
        if (ns.name == "phi") phi = &ns.state;
    }
    if (!psi || !phi) {
        if (states.size() < 2)
            throw ValidationError("state file must define two states (sections 'state: psi' and "
                                  "'state: phi', or two unnamed sections)");
        psi = &states[0].state;
        phi = &states[1].state;
    }
    pair.psi = ensure_normalized(*psi, "psi");
    pair.phi = ensure_normalized(*phi, "phi");

    if (!opt.ancilla.empty()) {
        cplx a, b;
        if (opt.ancilla == "max") {
            a = b = std::sqrt(0.5);
        } else {
            const auto colon = opt.ancilla.find(':');
            if (colon != std::string::npos) {
                a = parse_real_pair_as_complex(opt.ancilla.substr(0, colon));
                b = parse_real_pair_as_complex(opt.ancilla.substr(colon + 1));
            } else {
                const auto comma = opt.ancilla.find(',');
                if (comma == std::string::npos)
                    throw ValidationError("--ancilla wants 'max', 'a,b' or 're,im:re,im'");
                a = parse_real_pair_as_complex(opt.ancilla.substr(0, comma));
                b = parse_real_pair_as_complex(opt.ancilla.substr(comma + 1));
            }
        }
        pair.psi = attach_ancilla(pair.psi, a, b);
        pair.phi = attach_ancilla(pair.phi, a, b);
    }
    return pair;
}

const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json protocol_to_json(const LoccProtocol& proto) {
    json j;
    j["format"] = "ferdisc-protocol-v1";
    j["partition"] = {{"n_alice", proto.partition.n_alice}, {"n_bob", proto.partition.n_bob}};
    j["construction"] = proto.construction;
    json alice = json::array();
    for (const auto& a : proto.alice_povm)
        alice.push_back({{"label", a.label}, {"effect", matrix_to_json(a.effect)}});
    j["alice_povm"] = std::move(alice);
    json bob;
    for (const auto& [label, povm] : proto.bob_povms) {
        json outcomes = json::array();
        for (const auto& o : povm)
            outcomes.push_back({{"decision", o.decision == Decision::Psi ? "psi" : "phi"},
                                {"effect", matrix_to_json(o.effect)}});
        bob[label] = std::move(outcomes);
    }
    j["bob_povms"] = std::move(bob);
    return j;
}

// Builds the protocol the other subcommands agree on: the zero-error tree
// for perfectly discriminable orthogonal pairs, otherwise the optimal-LOCC
// tree at the given prior (odd pairs are mapped to the even sector first).
struct ProtocolChoice {
    LoccProtocol protocol;
    DiscriminationInstance instance; // the pair the protocol actually measures
    bool flipped = false;
    std::string note;
};

ProtocolChoice choose_protocol(const StatePair& pair, const CommonOptions& opt) {
    ProtocolChoice out{{}, make_instance(pair.psi, pair.phi, opt.prior), false, ""};
    const cplx overlap = dot(pair.psi.amplitudes, pair.phi.amplitudes);
    if (std::abs(overlap) <= opt.tol) {
        const DiscriminabilityVerdict verdict = classify_perfect(pair.psi, pair.phi, opt.tol);
        if (verdict.perfect()) {
            out.protocol = build_perfect_protocol(verdict, pair.psi, pair.phi, opt.tol);
            out.note = "perfect (" + to_string(verdict.tag) + ")";
            return out;
        }
    }
    // non-orthogonal pairs share a sector (cross-parity overlaps vanish)
    FockVector a = pair.psi, b = pair.phi;
    if (a.sector == Parity::Odd) {
        a = flip_last_bob_mode(a);
        b = flip_last_bob_mode(b);
        out.flipped = true;
        out.instance = make_instance(a, b, opt.prior);
        out.note = "optimal LOCC at p=" + fmt(opt.prior) + " (odd pair mapped to even)";
    } else {
        out.note = "optimal LOCC at p=" + fmt(opt.prior);
    }
    const DeltaOperator d = delta(out.instance);
    out.protocol = build_optimal_locc_protocol(d, sector_projectors(a.partition), opt.tol);
    return out;
}

int run_check(const CommonOptions& opt, const std::string& dump_path, bool explain) {
    const StatePair pair = load_pair(opt);
    if (!dump_path.empty()) save_state_file(dump_path, pair.file);

    const DiscriminabilityVerdict v = classify_perfect(pair.psi, pair.phi, opt.tol);
    if (opt.format == "json") {
        json j;
        j["verdict"] = to_string(v.tag);
        j["perfect_locc"] = v.perfect();
        j["sigma_E"] = {v.sigma_E.real(), v.sigma_E.imag()};
        j["sigma_O"] = {v.sigma_O.real(), v.sigma_O.imag()};
        j["components_zero"] = {{"psi_E", v.psi_E_zero},
                                {"psi_O", v.psi_O_zero},
                                {"phi_E", v.phi_E_zero},
                                {"phi_O", v.phi_O_zero}};
        j["odd_pair_mapped"] = v.odd_pair_mapped;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "verdict: " << to_string(v.tag) << "\n";
    std::cout << "perfect LOCC discrimination: " << (v.perfect() ? "yes" : "no") << "\n";
    std::cout << "psi sector: " << parity_name(pair.psi.sector)
              << ", phi sector: " << parity_name(pair.phi.sector) << "\n";
    if (v.tag != VerdictTag::DifferentGlobalParity) {
        std::cout << "Sigma_E = " << fmt(v.sigma_E) << "\n";
        std::cout << "Sigma_O = " << fmt(v.sigma_O) << "\n";
        if (v.odd_pair_mapped)
            std::cout << "(odd pair mapped to the even sector via Bob's last-mode flip)\n";
    }
    if (explain && v.tag != VerdictTag::DifferentGlobalParity) {
        FockVector a = pair.psi, b = pair.phi;
        if (v.odd_pair_mapped) {
            a = flip_last_bob_mode(a);
            b = flip_last_bob_mode(b);
        }
        const SectorSplit sa = sector_split(a), sb = sector_split(b);
        std::cout << "|psi_E| = " << fmt(sa.norm_E) << ", |psi_O| = " << fmt(sa.norm_O)
                  << ", |phi_E| = " << fmt(sb.norm_E) << ", |phi_O| = " << fmt(sb.norm_O) << "\n";
        for (const auto& [cls, ue, ve] : {std::tuple{SectorClass::EE, sa.psi_E, sb.psi_E},
                                          std::tuple{SectorClass::OO, sa.psi_O, sb.psi_O}}) {
            const char* name = cls == SectorClass::EE ? "E" : "O";
            const cplx sig = cls == SectorClass::EE ? v.sigma_E : v.sigma_O;
            if (std::abs(sig) > opt.tol) {
                std::cout << name << ": components overlap, no orthogonal local decomposition\n";
                continue;
            }
            if (ue.norm() <= opt.tol && ve.norm() <= opt.tol) {
                std::cout << name << ": empty sector\n";
                continue;
            }
            const WalgateDecomposition wd = walgate_decompose(ue, ve, opt.tol);
            std::cout << name << ": local decomposition over " << wd.alice_basis.size()
                      << " Alice basis vectors; max |<eta_i|nu_i>| = ";
            double worst = 0.0;
            for (std::size_t i = 0; i < wd.bob_eta.size(); ++i)
                worst = std::max(worst, std::abs(dot(wd.bob_eta[i], wd.bob_nu[i])));
            std::cout << fmt(worst) << "\n";
        }
    }
    return 0;
}

int run_error(const CommonOptions& opt) {
    const StatePair pair = load_pair(opt);
    FockVector a = pair.psi, b = pair.phi;
    bool flipped = false;

    double hel = 0.0, locc = 0.0;
    bool optimal = true;
    if (a.sector != b.sector) {
        // orthogonal across parity sectors: the parity protocol is exact
        hel = locc = 0.0;
    } else {
        if (a.sector == Parity::Odd) {
            a = flip_last_bob_mode(a);
            b = flip_last_bob_mode(b);
            flipped = true;
        }
        const DeltaOperator d = delta(make_instance(a, b, opt.prior));
        const SectorProjectors proj = sector_projectors(a.partition);
        hel = helstrom_error(d);
        locc = locc_error(d, proj);
        optimal = is_locc_optimal(d, proj, opt.tol);
    }

    if (opt.format == "json") {
        json j;
        j["prior_p"] = opt.prior;
        j["helstrom_error"] = hel;
        j["locc_error"] = locc;
        j["locc_optimal"] = optimal;
        j["odd_pair_mapped"] = flipped;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "prior p = " << fmt(opt.prior) << "\n";
    std::cout << "helstrom error = " << fmt(hel) << "\n";
    std::cout << "locc error     = " << fmt(locc) << "\n";
    std::cout << "locc optimal: " << (optimal ? "yes" : "no") << "\n";
    if (flipped) std::cout << "(odd pair mapped to the even sector)\n";
    return 0;
}

int run_prior(const CommonOptions& opt) {
    const StatePair pair = load_pair(opt);
    const CriticalPrior cp = critical_prior(pair.psi, pair.phi, opt.tol);
    if (opt.format == "json") {
        json j;
        switch (cp.kind) {
            case CriticalPrior::Kind::AllPriors: j["kind"] = "all"; break;
            case CriticalPrior::Kind::Unique: j["kind"] = "unique"; break;
            case CriticalPrior::Kind::None: j["kind"] = "none"; break;
        }
        if (cp.kind == CriticalPrior::Kind::Unique) j["p"] = cp.p;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    switch (cp.kind) {
        case CriticalPrior::Kind::AllPriors:
            std::cout << "critical prior: every prior admits an optimal LOCC protocol\n";
            break;
        case CriticalPrior::Kind::Unique:
            std::cout << "critical prior: p = " << fmt(cp.p) << "\n";
            break;
        case CriticalPrior::Kind::None:
            std::cout << "critical prior: none (no prior makes unassisted LOCC optimal)\n";
            break;
    }
    return 0;
}

int run_protocol(const CommonOptions& opt, const std::string& out_path) {
    const StatePair pair = load_pair(opt);
    const ProtocolChoice choice = choose_protocol(pair, opt);
    const double err = analytic_error(choice.protocol, choice.instance);

    const json j = protocol_to_json(choice.protocol);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw ValidationError("cannot open '" + out_path + "' for writing");
        out << j.dump(2) << "\n";
    } else if (opt.format == "json") {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "construction: " << choice.protocol.construction << " [" << choice.note << "]\n";
    std::cout << "alice outcomes: " << choice.protocol.alice_povm.size() << "\n";
    std::cout << "analytic error = " << fmt(err) << "\n";
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_simulate(const CommonOptions& opt, std::uint64_t shots) {
    const StatePair pair = load_pair(opt);
    const ProtocolChoice choice = choose_protocol(pair, opt);
    const double err = analytic_error(choice.protocol, choice.instance);
    const SimulationReport rep = simulate(choice.protocol, choice.instance, shots, opt.seed);

    if (opt.format == "json") {
        json j;
        j["construction"] = choice.protocol.construction;
        j["analytic_error"] = err;
        j["shots"] = rep.shots;
        j["errors"] = rep.errors;
        j["empirical_error"] = rep.empirical_error;
        j["std_err"] = rep.std_err;
        j["seed"] = rep.seed;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "construction: " << choice.protocol.construction << " [" << choice.note << "]\n";
    std::cout << "analytic error  = " << fmt(err) << "\n";
    std::cout << "shots           = " << rep.shots << "\n";
    std::cout << "errors          = " << rep.errors << "\n";
    std::cout << "empirical error = " << fmt(rep.empirical_error) << " (std err "
              << fmt(rep.std_err) << ")\n";
    std::cout << "seed            = " << rep.seed << "\n";
    return 0;
}

int run_oracle(const CommonOptions& opt, std::uint64_t trials) {
    const StatePair pair = load_pair(opt);
    FockVector a = pair.psi, b = pair.phi;
    if (a.sector != b.sector)
        throw ValidationError("oracle needs a same-parity pair (cross-parity pairs are exactly "
                              "discriminable)");
    bool flipped = false;
    if (a.sector == Parity::Odd) {
        a = flip_last_bob_mode(a);
        b = flip_last_bob_mode(b);
        flipped = true;
    }
    const DeltaOperator d = delta(make_instance(a, b, opt.prior));
    const SectorProjectors proj = sector_projectors(a.partition);
    const double sampled = random_sep_sample(d, proj, trials, opt.seed);
    const double sep = best_sep_value(d, proj);
    const double unconstrained = unconstrained_best_value(d);

    if (opt.format == "json") {
        json j;
        j["trials"] = trials;
        j["seed"] = opt.seed;
        j["sampled_sep_max"] = sampled;
        j["best_sep_value"] = sep;
        j["unconstrained_best_value"] = unconstrained;
        j["locc_error"] = opt.prior - sep;
        j["helstrom_error"] = opt.prior - unconstrained;
        j["odd_pair_mapped"] = flipped;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "sandwich over " << trials << " sampled block effects (seed " << opt.seed << "):\n";
    std::cout << "  sampled max  = " << fmt(sampled) << "\n";
    std::cout << "  best SEP     = " << fmt(sep) << "  -> locc error " << fmt(opt.prior - sep)
              << "\n";
    std::cout << "  unconstrained= " << fmt(unconstrained) << "  -> helstrom error "
              << fmt(opt.prior - unconstrained) << "\n";
    if (flipped) std::cout << "(odd pair mapped to the even sector)\n";
    return 0;
}

std::vector<double> parse_range_or_list(const std::string& text, const char* what) {
    std::vector<double> out;
    try {
        const auto c1 = text.find(':');
        if (c1 == std::string::npos) {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        } else {
            const auto c2 = text.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw ValidationError(std::string(what) + " wants 'lo:hi:n' or a comma list");
            const double lo = std::stod(text.substr(0, c1));
            const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
            const std::size_t n = static_cast<std::size_t>(std::stoul(text.substr(c2 + 1)));
            if (n < 1) throw ValidationError(std::string(what) + ": need at least one sample");
            for (std::size_t i = 0; i < n; ++i) {
                const double w =
                    n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
                out.push_back(lo * (1.0 - w) + hi * w);
            }
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError(std::string("cannot parse ") + what + " '" + text + "'");
    }
    if (out.empty()) throw ValidationError(std::string(what) + " is empty");
    return out;
}

int run_sweep(const std::string& xi_text, const std::string& eps_text, const std::string& out_path,
              const std::string& emit_plot, const std::string& plot_out) {
    std::vector<double> xis = parse_range_or_list(xi_text, "--xi");
    std::sort(xis.begin(), xis.end(), std::greater<double>());
    const std::vector<double> eps = parse_range_or_list(eps_text, "--eps");
    if (eps.size() < 2) throw ValidationError("--eps needs at least two samples");
    const double lo = *std::min_element(eps.begin(), eps.end());
    const double hi = *std::max_element(eps.begin(), eps.end());

    const Fig1Grid grid = fig1_grid(xis, lo, hi, eps.size());

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw ValidationError("cannot open '" + out_path + "' for writing");
        write_grid_csv(out, grid.points);
        std::cout << "wrote " << grid.points.size() << " grid points to " << out_path << "\n";
    } else {
        write_grid_csv(std::cout, grid.points);
    }

    const Fig1Checks& ck = grid.checks;
    auto line = [](bool ok, const std::string& what) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    };
    line(ck.zero_line_ok, "delta_perr vanishes on the eps=0 line (max " +
                              fmt(ck.max_abs_at_eps0) + ")");
    line(ck.nonnegative_ok, "both gaps are nonnegative (min " + fmt(ck.min_delta_perr) + ", " +
                                fmt(ck.min_delta_perr_prime) + ")");
    line(ck.bounds_ok, "k|eps|+g*eps and kappa|eps| bounds hold (worst slack " +
                           fmt(ck.worst_bound_slack) + ", " + fmt(ck.worst_prime_slack) + ")");
    line(ck.corner_monotone_ok, "one-sided slope at eps=0 grows as xi shrinks");
    std::cout << "corner slopes (xi -> slope+):";
    for (std::size_t i = 0; i < ck.xi_ladder.size(); ++i)
        std::cout << " " << fmt(ck.xi_ladder[i]) << "->" << fmt(ck.corner_slope_plus[i]);
    std::cout << "\n";

    if (!emit_plot.empty()) {
        if (emit_plot != "gnuplot")
            throw ValidationError("--emit-plot supports only 'gnuplot'");
        const std::string csv = out_path.empty() ? "grid.csv" : out_path;
        if (!plot_out.empty()) {
            std::ofstream out(plot_out);
            if (!out) throw ValidationError("cannot open '" + plot_out + "' for writing");
            emit_gnuplot_script(out, csv);
            std::cout << "wrote plot script to " << plot_out << "\n";
        } else {
            emit_gnuplot_script(std::cout, csv);
        }
    }
    return ck.all_ok() ? 0 : 3;
}

const char kFileHelp[] = R"(State file format:
  modes: <n_alice>+<n_bob>     header (required first)
  state: <name>                starts a named state section
  <bitstring>: <re>,<im>       basis term; bit i of the string is mode i,
                               Alice's modes come first
  # comment                    blank lines are ignored

Example (the orthogonal pair (|00>|00> +- |01>|01>)/sqrt(2)):
  modes: 2+2
  state: psi
  0000: 0.70710678118654752,0
  0101: 0.70710678118654752,0
  state: phi
  0000: 0.70710678118654752,0
  0101: -0.70710678118654752,0
)";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LOCC discrimination of bipartite Fermionic pure states"};
    app.footer(kFileHelp);
    app.require_subcommand(1);

    CommonOptions opt;
    std::string dump_path, out_path, plot_out, emit_plot;
    std::string xi_text = "0.2,0.1,0.05,0.02";
    std::string eps_text = "-0.1:0.1:41";
    std::uint64_t shots = 100000, trials = 10000;
    bool explain = false;

    auto add_common = [&](CLI::App* cmd, bool with_prior) {
        cmd->add_option("--in", opt.in_path, "State file with the pair to discriminate");
        add_tol_option(cmd, opt);
        cmd->add_option("--ancilla", opt.ancilla,
                        "Attach a shared two-mode ancilla a|00>+b|11>: 'max' or 'a,b'");
        cmd->add_option("--format", opt.format, "Output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        if (with_prior)
            cmd->add_option("--p", opt.prior, "Prior probability of psi (default 0.5)")
                ->check(CLI::Range(0.0, 1.0));
    };

    CLI::App* check = app.add_subcommand("check", "Classify perfect LOCC discriminability");
    add_common(check, false);
    check->add_option("--dump", dump_path, "Re-emit the parsed state file (round-trip safe)");
    check->add_flag("--explain", explain, "Show sector norms, overlaps and local decompositions");

    CLI::App* error_cmd = app.add_subcommand("error", "Helstrom and LOCC error probabilities");
    add_common(error_cmd, true);

    CLI::App* prior_cmd = app.add_subcommand("prior", "Critical prior for optimal unassisted LOCC");
    add_common(prior_cmd, false);

    CLI::App* protocol_cmd = app.add_subcommand("protocol", "Construct the measurement tree");
    add_common(protocol_cmd, true);
    protocol_cmd->add_option("--out", out_path, "Write the protocol as JSON to this path");

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--shots", shots, "Number of sampled preparations");
    simulate_cmd->add_option("--seed", opt.seed, "RNG seed (default 314159)");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Brute-force checks of the error formulas");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--trials", trials, "Number of random block effects");
    oracle_cmd->add_option("--seed", opt.seed, "RNG seed (default 314159)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Prior-perturbation grid over the example family");
    sweep_cmd->add_option("--xi", xi_text, "Family parameters: comma list or lo:hi:n");
    sweep_cmd->add_option("--eps", eps_text, "Prior perturbations: lo:hi:n (default -0.1:0.1:41)");
    sweep_cmd->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    sweep_cmd->add_option("--emit-plot", emit_plot, "Emit a plot script ('gnuplot')");
    sweep_cmd->add_option("--plot-out", plot_out, "Plot script path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        apply_env_tol(opt);
        if (check->parsed()) return run_check(opt, dump_path, explain);
        if (error_cmd->parsed()) return run_error(opt);
        if (prior_cmd->parsed()) return run_prior(opt);
        if (protocol_cmd->parsed()) return run_protocol(opt, out_path);
        if (simulate_cmd->parsed()) return run_simulate(opt, shots);
        if (oracle_cmd->parsed()) return run_oracle(opt, trials);
        if (sweep_cmd->parsed())
            return run_sweep(xi_text, eps_text, out_path, emit_plot, plot_out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

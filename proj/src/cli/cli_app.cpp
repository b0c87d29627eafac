#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sigma_lattice/analysis.hpp"
#include "sigma_lattice/detail/parallel.hpp"
#include "sigma_lattice/elliptic.hpp"
#include "sigma_lattice/json_io.hpp"
#include "sigma_lattice/lll.hpp"
#include "sigma_lattice/selftest.hpp"

namespace sigma_lattice::cli {
namespace {

using C = std::complex<double>;

// All numeric output goes through one formatter: 17 significant digits,
// C locale, '.' decimal point. Values round-trip through strtod.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_pair(const C& z) {
    return "[" + fmt(z.real()) + "," + fmt(z.imag()) + "]";
}

C parse_complex(const std::string& s) {
    double re = 0, im = 0;
    char tail = 0;
    const int got = std::sscanf(s.c_str(), "%lf,%lf%c", &re, &im, &tail);
    if (got != 2) throw CLI::ValidationError("complex", "expected re,im (no spaces): got '" + s + "'");
    return {re, im};
}

LatticeVector parse_vector(const std::string& s) {
    long long m = 0, n = 0;
    char tail = 0;
    const int got = std::sscanf(s.c_str(), "%lld,%lld%c", &m, &n, &tail);
    if (got != 2) throw CLI::ValidationError("vector", "expected m,n integers: got '" + s + "'");
    return {m, n};
}

nlohmann::json load_json(const std::string& path) {
    if (path == "-") return nlohmann::json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("file", "cannot open '" + path + "'");
    return nlohmann::json::parse(in);
}

struct LatticeFlags {
    std::string omega1, omega2, file;

    void add_to(CLI::App* cmd, bool required) {
        auto* o1 = cmd->add_option("--omega1", omega1, "half-period omega1 as re,im");
        auto* o2 = cmd->add_option("--omega2", omega2, "half-period omega2 as re,im");
        auto* f = cmd->add_option("--lattice", file, "lattice JSON file ('-' for stdin)");
        f->excludes(o1)->excludes(o2);
        o1->needs(o2);
        o2->needs(o1);
        if (required) {
            // one of the two forms must be given; validated in build()
        }
    }

    Lattice<double> build() const {
        if (!file.empty()) return lattice_from_json(load_json(file));
        if (omega1.empty() || omega2.empty())
            throw CLI::ValidationError("lattice", "provide --omega1/--omega2 or --lattice");
        return lattice_from_basis(parse_complex(omega1), parse_complex(omega2));
    }
};

const std::vector<std::string> kFunctionNames{"sigma",  "sigma_orig", "zeta",  "wp",  "sigma1",
                                              "sigma2", "sigma3",     "completion", "zfun"};

LogComplex<double> eval_function_log(const SigmaEvaluator<double>& ev, const std::string& fn,
                                     const C& z) {
    if (fn == "sigma") return sigma_modified_log(ev, z);
    if (fn == "sigma_orig") return sigma_original_log(ev, z);
    if (fn == "zeta") return LogComplex<double>::from(zeta_modified(ev, z));
    if (fn == "wp") return LogComplex<double>::from(wp_modified(ev, z));
    if (fn == "sigma1") return sigma_symmetric_log(ev, HalfPeriodIndex::omega1, z);
    if (fn == "sigma2") return sigma_symmetric_log(ev, HalfPeriodIndex::omega2, z);
    if (fn == "sigma3") return sigma_symmetric_log(ev, HalfPeriodIndex::omega3, z);
    if (fn == "completion") return LogComplex<double>::from(eisenstein_completion(ev, z));
    if (fn == "zfun") return z_quasi_log(ev, z);
    throw CLI::ValidationError("fn", "unknown function '" + fn + "'");
}

std::string value_json(const LogComplex<double>& v, bool log_split) {
    if (log_split) return "{\"logAbs\":" + fmt(v.log_abs) + ",\"arg\":" + fmt(v.arg) + "}";
    const C w = v.value();
    return "{\"re\":" + fmt(w.real()) + ",\"im\":" + fmt(w.imag()) + "}";
}

int cmd_eval(const LatticeFlags& lf, const std::string& fn, const std::string& zs, bool log_split,
             std::ostream& out) {
    const auto lat = lf.build();
    const SigmaEvaluator<double> ev(lat);
    out << value_json(eval_function_log(ev, fn, parse_complex(zs)), log_split) << "\n";
    return 0;
}

int cmd_invariants(const LatticeFlags& lf, std::ostream& out) {
    const auto lat = lf.build();
    const C legendre = eta_modified(lat, HalfPeriodIndex::omega1) * lat.omega2() -
                       eta_modified(lat, HalfPeriodIndex::omega2) * lat.omega1();
    std::ostringstream os;
    os << "{\"area\":" << fmt(lat.area());
    os << ",\"tau\":" << fmt_pair(lat.tau());
    os << ",\"orientation\":" << lat.orientation();
    os << ",\"gamma2\":" << fmt_pair(lat.gamma2());
    os << ",\"gamma4\":" << fmt_pair(lat.gamma4());
    os << ",\"gamma6\":" << fmt_pair(lat.gamma6());
    os << ",\"eta\":[";
    for (int i = 1; i <= 3; ++i)
        os << (i > 1 ? "," : "") << fmt_pair(eta_original(lat, half_period_index(i)));
    os << "],\"etaModified\":[";
    for (int i = 1; i <= 3; ++i)
        os << (i > 1 ? "," : "") << fmt_pair(eta_modified(lat, half_period_index(i)));
    os << "],\"legendreCheck\":" << fmt_pair(legendre) << "}";
    out << os.str() << "\n";
    return 0;
}

int cmd_grid(const LatticeFlags& lf, const std::string& fn, int n, int cells, bool log_split,
             const std::string& format, std::ostream& out) {
    const auto lat = lf.build();
    const SigmaEvaluator<double> ev(lat);
    const C p1 = 2.0 * lat.omega1();
    const C p2 = 2.0 * lat.omega2();
    const std::size_t side = static_cast<std::size_t>(n) * static_cast<std::size_t>(cells);

    std::vector<LogComplex<double>> vals(side * side);
    std::vector<C> pts(side * side);
    detail::parallel_for(side * side, [&](std::size_t idx) {
        const std::size_t i = idx / side;
        const std::size_t j = idx % side;
        const double a = (static_cast<double>(i) + 0.5) / n;
        const double b = (static_cast<double>(j) + 0.5) / n;
        const C z = a * p1 + b * p2;
        pts[idx] = z;
        vals[idx] = eval_function_log(ev, fn, z);
    });

    const bool json = format == "json";
    const char* c3 = log_split ? "logAbs" : "re";
    const char* c4 = log_split ? "arg" : "im";
    if (json) {
        out << "{\"header\":[\"x\",\"y\",\"" << c3 << "\",\"" << c4 << "\"],\"rows\":[";
    } else {
        out << "x,y," << c3 << "," << c4 << "\n";
    }
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
        double v3, v4;
        if (log_split) {
            v3 = vals[idx].log_abs;
            v4 = vals[idx].arg;
        } else {
            const C w = vals[idx].value();
            v3 = w.real();
            v4 = w.imag();
        }
        if (json) {
            out << (idx ? "," : "") << "[" << fmt(pts[idx].real()) << "," << fmt(pts[idx].imag())
                << "," << fmt(v3) << "," << fmt(v4) << "]";
        } else {
            out << fmt(pts[idx].real()) << "," << fmt(pts[idx].imag()) << "," << fmt(v3) << ","
                << fmt(v4) << "\n";
        }
    }
    if (json) out << "]}\n";
    return 0;
}

int cmd_zeros(const LatticeFlags& lf, int grid_n, std::ostream& out) {
    const auto lat = lf.build();
    const SigmaEvaluator<double> ev(lat);
    const auto zeros = find_completion_zeros(ev, grid_n);
    const auto rep = voronoi_comparison(ev, grid_n);
    int nh = 0, na = 0, wsum = -1;
    std::ostringstream os;
    os << "{\"zeros\":[";
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        const auto& r = zeros[i];
        (r.kind == ZeroKind::holomorphic ? nh : na)++;
        wsum += r.winding;
        os << (i ? "," : "") << "{\"position\":" << fmt_pair(r.position)
           << ",\"winding\":" << r.winding << ",\"kind\":\""
           << (r.kind == ZeroKind::holomorphic ? "holomorphic" : "antiholomorphic")
           << "\",\"residual\":" << fmt(r.residual_norm) << "}";
    }
    os << "],\"census\":{\"nHolo\":" << nh << ",\"nAnti\":" << na << ",\"windingSum\":" << wsum
       << "},\"voronoiMaxDiscrepancy\":" << fmt(rep.max_discrepancy) << "}";
    out << os.str() << "\n";
    return 0;
}

int cmd_wavefunction(const LatticeFlags& lf, const std::string& spec_file,
                     const std::vector<std::string>& zero_flags, int n_phi,
                     const std::string& k_flag, const std::string& zs,
                     const std::string& boundary, bool log_split, std::ostream& out) {
    WavefunctionSpec<double> spec = [&] {
        if (!spec_file.empty()) return wavefunction_spec_from_json(load_json(spec_file));
        const auto lat = lf.build();
        std::vector<C> zeros;
        zeros.reserve(zero_flags.size());
        for (const auto& s : zero_flags) zeros.push_back(parse_complex(s));
        const int n = n_phi > 0 ? n_phi : static_cast<int>(zeros.size());
        if (!k_flag.empty())
            return WavefunctionSpec<double>::with_boundary_phase(lat, n, std::move(zeros),
                                                                 parse_complex(k_flag));
        return WavefunctionSpec<double>::from_zeros(lat, n, std::move(zeros));
    }();

    const C z = parse_complex(zs);
    std::ostringstream os;
    os << "{\"nPhi\":" << spec.n_phi() << ",\"ell\":" << fmt(spec.ell())
       << ",\"K\":" << fmt_pair(spec.boundary_k())
       << ",\"psi\":" << value_json(single_particle_psi_log(spec, z), log_split);
    if (!boundary.empty()) {
        const LatticeVector v = parse_vector(boundary);
        os << ",\"boundaryResidual\":" << fmt(boundary_residual(spec, z, v));
    }
    os << "}";
    out << os.str() << "\n";
    return 0;
}

int cmd_selftest(std::uint64_t seed, int lattices, double perturb_gamma2, std::ostream& out) {
    SelfTestOptions opts;
    opts.seed = seed;
    opts.lattice_count = lattices;
    opts.gamma2_bias = perturb_gamma2;
    const auto results = run_selftest(opts);
    bool all_ok = true;
    for (const auto& r : results) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-28s worst %.3e  tol %.1e", r.passed ? "PASS" : "FAIL",
                      r.name.c_str(), r.worst, r.tolerance);
        out << line << "\n";
        if (!r.passed) {
            out << "     at " << r.detail << "\n";
            all_ok = false;
        }
    }
    out << (all_ok ? "selftest: all identities hold" : "selftest: FAILURES detected") << "\n";
    return all_ok ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Modular-invariant Weierstrass sigma/zeta/wp functions and torus "
                 "lowest-Landau-level wavefunctions"};
    app.require_subcommand(1);

    LatticeFlags lf_eval, lf_inv, lf_grid, lf_zeros, lf_wf;
    std::string fn_eval = "sigma", fn_grid = "sigma";
    std::string z_eval, z_wf, k_flag, spec_file, boundary;
    std::vector<std::string> zero_flags;
    bool log_eval = false, log_grid = false, log_wf = false;
    int grid_res = 64, grid_cells = 1, zeros_grid = 32, wf_nphi = 0;
    std::string grid_format = "csv";
    std::uint64_t st_seed = 42;
    int st_lattices = 100;
    double st_perturb = 0.0;

    auto* eval = app.add_subcommand("eval", "evaluate one function at one point");
    lf_eval.add_to(eval, true);
    eval->add_option("--fn", fn_eval, "function name")
        ->check(CLI::IsMember(kFunctionNames));
    eval->add_option("--z", z_eval, "evaluation point re,im")->required();
    eval->add_flag("--log", log_eval, "print log-split {logAbs, arg}");

    auto* inv = app.add_subcommand("invariants", "lattice invariants and eta constants");
    lf_inv.add_to(inv, true);

    auto* grid = app.add_subcommand("grid", "sample a function over primitive cells");
    lf_grid.add_to(grid, true);
    grid->add_option("--fn", fn_grid, "function name")->check(CLI::IsMember(kFunctionNames));
    grid->add_option("--n", grid_res, "samples per cell edge")->check(CLI::Range(1, 4096));
    grid->add_option("--cells", grid_cells, "cells per direction")->check(CLI::Range(1, 8));
    grid->add_flag("--log", log_grid, "emit logAbs,arg columns");
    grid->add_option("--format", grid_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* zeros = app.add_subcommand("zeros", "census of the zeros of the periodic completion");
    lf_zeros.add_to(zeros, true);
    zeros->add_option("--grid-n", zeros_grid, "Newton seeding grid")->check(CLI::Range(16, 512));

    auto* wf = app.add_subcommand("wavefunction", "evaluate a torus LLL wavefunction");
    lf_wf.add_to(wf, false);
    wf->add_option("--spec", spec_file, "wavefunction spec JSON file ('-' for stdin)");
    wf->add_option("--nphi", wf_nphi, "flux count (defaults to number of --zero flags)");
    wf->add_option("--zero", zero_flags, "prescribed zero re,im (repeatable)");
    wf->add_option("--k", k_flag, "boundary phase K re,im (defaults to pi*sum(zeros)/A)");
    wf->add_option("--z", z_wf, "evaluation point re,im")->required();
    wf->add_option("--boundary", boundary, "also report boundary residual for lattice vector m,n");
    wf->add_flag("--log", log_wf, "print log-split psi");

    auto* st = app.add_subcommand("selftest", "run the identity self-test suite");
    st->add_option("--seed", st_seed, "RNG seed");
    st->add_option("--lattices", st_lattices, "number of random lattices")->check(CLI::Range(1, 100000));
    st->add_option("--perturb-gamma2", st_perturb,
                   "test hook: bias gamma_2 by this amount (suite must then fail)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        if (eval->parsed()) return cmd_eval(lf_eval, fn_eval, z_eval, log_eval, out);
        if (inv->parsed()) return cmd_invariants(lf_inv, out);
        if (grid->parsed())
            return cmd_grid(lf_grid, fn_grid, grid_res, grid_cells, log_grid, grid_format, out);
        if (zeros->parsed()) return cmd_zeros(lf_zeros, zeros_grid, out);
        if (wf->parsed())
            return cmd_wavefunction(lf_wf, spec_file, zero_flags, wf_nphi, k_flag, z_wf, boundary,
                                    log_wf, out);
        if (st->parsed()) return cmd_selftest(st_seed, st_lattices, st_perturb, out);
        err << "no subcommand\n";
        return 2;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const PoleAt& e) {
        err << "pole: " << e.what() << "\n";
        return 3;
    } catch (const NotCommensurate& e) {
        err << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateBasis& e) {
        err << "bad lattice: " << e.what() << "\n";
        return 2;
    } catch (const NotUnimodular& e) {
        err << "bad basis change: " << e.what() << "\n";
        return 2;
    } catch (const CountMismatch& e) {
        err << "bad spec: " << e.what() << "\n";
        return 2;
    } catch (const ParticleCountMismatch& e) {
        err << "bad configuration: " << e.what() << "\n";
        return 2;
    } catch (const IncompleteCensus& e) {
        err << "census failure: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        err << "bad JSON: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace sigma_lattice::cli

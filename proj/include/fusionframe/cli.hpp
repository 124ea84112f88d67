#ifndef FUSIONFRAME_CLI_HPP
#define FUSIONFRAME_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 I/O, parse or usage error,
// 2 precondition violation, 3 internal invariant failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fusionframe/checks.hpp"
#include "fusionframe/construct.hpp"
#include "fusionframe/examples.hpp"
#include "fusionframe/family_io.hpp"
#include "fusionframe/fusion.hpp"
#include "fusionframe/refine.hpp"
#include "fusionframe/sweep.hpp"

namespace fusionframe::cli {

enum Exit : int { ok = 0, io_error = 1, precondition = 2, invariant = 3 };

namespace detail {

inline void row(std::ostream& out, const std::string& key, const std::string& value)
{
    out << std::left << std::setw(20) << key << value << '\n';
}

inline std::string yes(bool b) { return b ? "yes" : "no"; }

inline std::string real(double x)
{
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

inline void analysis_table(std::ostream& out, const FusionAnalysis& a)
{
    row(out, "fusion frame", yes(a.is_fusion_frame));
    row(out, "lower bound A", real(a.lower_A));
    row(out, "upper bound B", real(a.upper_B));
    row(out, "excess", std::to_string(a.excess));
    row(out, "tight", yes(a.is_tight));
    row(out, "parseval", yes(a.is_parseval));
    row(out, "minimal", yes(a.is_minimal));
    row(out, "riesz basis", yes(a.is_rbs));
    row(out, "orthonormal basis", yes(a.is_obs));
}

/// `text` to `path`, or to `out` when path is empty.
inline void emit(std::ostream& out, const std::string& path, const std::string& text)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f || !(f << text) || !f.flush())
        throw IoError("cannot write '" + path + "'");
}

inline std::string csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream s;
    s << "n,lower_A,upper_B,excess,min_weight_sq,aux\n";
    for (const auto& r : rows) {
        s << r.n << ',' << io::format_real(r.lower_A) << ',' << io::format_real(r.upper_B) << ',' << r.excess << ','
          << io::format_real(r.min_weight_sq) << ',';
        for (std::size_t k = 0; k < r.aux.size(); ++k)
            s << (k ? ";" : "") << r.aux[k].first << '=' << io::format_real(r.aux[k].second);
        s << '\n';
    }
    return s.str();
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fusion frames: analysis, dilations, refinements and example sweeps", "fusionframe"};
    app.require_subcommand(1);

    std::string family_path;
    std::string frames_path;
    std::string out_path;
    bool json_only = false;

    auto* analyze = app.add_subcommand("analyze", "Classify a weighted family");
    analyze->add_option("file", family_path, "family file")->required();
    analyze->add_flag("--json", json_only, "print only the JSON report");

    std::string mode;
    auto* dilate = app.add_subcommand("dilate", "Dilate a fusion frame");
    dilate->add_option("--mode", mode, "riesz | parseval | oblique")
        ->required()
        ->check(CLI::IsMember({"riesz", "parseval", "oblique"}));
    dilate->add_option("file", family_path, "family file")->required();
    dilate->add_option("--out", out_path, "write the dilation JSON here");

    bool to_rbs = false;
    auto* refine = app.add_subcommand("refine", "Refine a fusion frame");
    refine->add_flag("--to-rbs", to_rbs, "reduce to a Riesz basis of subspaces")->required();
    refine->add_option("file", family_path, "family file")->required();
    refine->add_option("--out", out_path, "write the refined family here");

    std::string example;
    std::vector<std::size_t> dims;
    std::string weights = "const:1";
    auto* sweep_cmd = app.add_subcommand("sweep", "Dimension sweep over a built-in example");
    sweep_cmd->add_option("--example", example, "ex7_1 .. ex7_6")->required();
    sweep_cmd->add_option("--dims", dims, "comma-separated dimensions")->required()->delimiter(',');
    sweep_cmd->add_option("--weights", weights, "const:c | geometric:r | harmonic | l2geometric");
    sweep_cmd->add_option("--csv", out_path, "write CSV here instead of stdout");

    auto* l2g = app.add_subcommand("local-to-global", "Assemble local frames into a global frame");
    l2g->add_option("family", family_path, "family file")->required();
    l2g->add_option("frames", frames_path, "frames file")->required();

    std::size_t samples = 0;
    std::uint64_t seed = 0;
    auto* c76 = app.add_subcommand("check-7-6", "Random search for a Parseval image of the C^4 family");
    c76->add_option("--samples", samples, "number of samples")->required()->check(CLI::PositiveNumber);
    c76->add_option("--seed", seed, "random seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : io_error;
    }

    try {
        if (*analyze) {
            const io::FamilyFile f = io::read_family_file(family_path);
            const FusionAnalysis a = analyze_fusion(f.family);
            if (!json_only) {
                detail::row(out, "ambient dim", std::to_string(f.family.ambient_dim()));
                detail::row(out, "members", std::to_string(f.family.size()));
                detail::analysis_table(out, a);
            }
            out << io::analysis_json(a).dump(2) << '\n';
        } else if (*dilate) {
            const io::FamilyFile f = io::read_family_file(family_path);
            const Dilation d = mode == "riesz"      ? riesz_dilation(f.family)
                               : mode == "parseval" ? parseval_dilation(f.family)
                                                    : oblique_dilation(f.family);
            const std::string text = io::dilation_json(d, f.family.ambient_dim()).dump(2) + "\n";
            if (!out_path.empty()) {
                detail::row(out, "kind", to_string(d.kind));
                detail::row(out, "big dim", std::to_string(d.big_dim));
                detail::row(out, "pieces", std::to_string(d.pieces.size()));
            }
            detail::emit(out, out_path, text);
        } else if (*refine) {
            const io::FamilyFile f = io::read_family_file(family_path);
            const RefineToRbs r = refine_to_rbs(f.family);
            const WeightedFamily v = refined_family(f.family, r.plan);
            std::ostream& log = out_path.empty() ? err : out;
            detail::row(log, "steps", std::to_string(r.steps.size()));
            for (std::size_t k = 0; k < r.steps.size(); ++k)
                detail::row(log, "  step " + std::to_string(k + 1),
                            "member " + std::to_string(r.steps[k].member) + ", E[W,V]=" +
                                std::to_string(r.steps[k].cumulative_excess_over) +
                                ", E(V)=" + std::to_string(r.steps[k].refined_excess));
            std::string kept;
            for (const auto i : r.plan.kept_indices())
                kept += (kept.empty() ? "" : ",") + std::to_string(i);
            detail::row(log, "kept members", kept);
            detail::emit(out, out_path, io::write_family(v));
        } else if (*sweep_cmd) {
            const auto rule = examples::WeightRule::parse(weights);
            const auto rows = sweep(example, dims, rule);
            const std::string text = detail::csv(rows);
            detail::emit(out, out_path, text);
            if (rows.size() > 1) {
                const SweepEvidence ev = evidence(rows);
                std::ostream& log = out_path.empty() ? err : out;
                detail::row(log, "lower_A decay", detail::real(ev.lower_decay) +
                                                      (ev.lower_monotone ? " (monotone)" : " (not monotone)"));
                detail::row(log, "upper_B growth", detail::real(ev.upper_growth) +
                                                       (ev.upper_monotone ? " (monotone)" : " (not monotone)"));
            }
        } else if (*l2g) {
            const io::FamilyFile f = io::read_family_file(family_path);
            const auto frames = io::read_frames_file(frames_path);
            const LocalToGlobal r = local_to_global(f.family, frames);
            detail::row(out, "global frame", detail::yes(r.global_analysis.is_frame));
            detail::row(out, "onb pieces frame", detail::yes(r.onb_analysis.is_frame));
            detail::row(out, "fusion frame", detail::yes(r.fusion_analysis.is_fusion_frame));
            detail::row(out, "local A", detail::real(r.local_A));
            detail::row(out, "local B", detail::real(r.local_B));
            detail::row(out, "global A", detail::real(r.global_analysis.lower_bound_A));
            detail::row(out, "global B", detail::real(r.global_analysis.upper_bound_B));
            detail::row(out, "fusion A", detail::real(r.fusion_analysis.lower_A));
            detail::row(out, "fusion B", detail::real(r.fusion_analysis.upper_B));
        } else if (*c76) {
            const ParsevalImpossibility r = parseval_impossibility_7_6(samples, seed);
            detail::row(out, "samples", std::to_string(r.samples));
            detail::row(out, "parseval hits", std::to_string(r.parseval_hits));
            detail::row(out, "min |S - I|", detail::real(r.min_distance));
            detail::row(out, "max |S - I|", detail::real(r.max_distance));
            if (r.parseval_hits != 0) {
                err << "error: a Parseval image was found\n";
                return invariant;
            }
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_error;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return precondition;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return invariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return invariant;
    }
    return ok;
}

} // namespace fusionframe::cli

#endif // FUSIONFRAME_CLI_HPP

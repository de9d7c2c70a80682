// Command-line front end: generate instances, run the distributed protocol
// with oracle verification and optional god-mode invariant checking, and
// sweep parameter grids emitting JSON-lines reports.
//
// Exit codes: 0 ok, 2 verification failure, 3 invariant violation,
// 4 protocol error, 1 usage/IO errors.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cmst/checker.hpp"
#include "cmst/generators.hpp"
#include "cmst/graph.hpp"
#include "cmst/oracle.hpp"
#include "cmst/report.hpp"

using namespace cmst;

namespace {

struct FamilyFlags {
    std::string family;
    std::int64_t n = 0, m = 0, rows = 0, cols = 0, clique = 0, tail = 0;
    std::uint64_t seed = 0;

    GraphFamily resolve() const {
        auto f = family_from_name(family);
        if (!f) throw GraphError(GraphErrorKind::InvalidParams, "unknown family " + family);
        GraphFamily spec;
        spec.family = *f;
        spec.n = n;
        spec.m = m;
        spec.rows = rows;
        spec.cols = cols;
        spec.clique = clique;
        spec.tail = tail;
        spec.seed = seed;
        return spec;
    }
};

void add_family_flags(CLI::App* cmd, FamilyFlags& ff) {
    cmd->add_option("--family", ff.family,
                    "path|cycle|grid|star|complete|gnm_connected|lollipop");
    cmd->add_option("--n", ff.n, "vertex count");
    cmd->add_option("--m", ff.m, "edge count (gnm_connected)");
    cmd->add_option("--rows", ff.rows, "grid rows");
    cmd->add_option("--cols", ff.cols, "grid cols");
    cmd->add_option("--clique", ff.clique, "lollipop clique size");
    cmd->add_option("--tail", ff.tail, "lollipop tail length");
    cmd->add_option("--seed", ff.seed, "generator seed");
}

int write_report(const RunReport& rep, const std::string& json_out, bool append) {
    if (json_out.empty()) return 0;
    std::ofstream out(json_out, append ? std::ios::app : std::ios::trunc);
    if (!out) {
        std::cerr << "cannot open " << json_out << "\n";
        return 1;
    }
    out << rep.to_json() << "\n";
    return 0;
}

int report_exit(const RunReport& rep) {
    if (!rep.invariant_violations.empty()) return 3;
    if (!rep.verified) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"round-accurate CONGEST simulator with a deterministic "
                 "distributed MST protocol"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate an instance edge-list file");
    FamilyFlags gen_ff;
    std::string gen_out;
    add_family_flags(gen, gen_ff);
    gen->add_option("--out", gen_out, "output path (default: stdout)");

    // ---- run ----------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run the protocol on one instance");
    FamilyFlags run_ff;
    std::string run_in, run_json, run_mst_out;
    int run_b = 1;
    std::int64_t run_k = -1, run_root = -1, run_cap = -1;
    bool run_check = false;
    add_family_flags(run, run_ff);
    run->add_option("--in", run_in, "edge-list file (instead of --family)");
    run->add_option("--b", run_b, "bandwidth multiplier");
    run->add_option("--k", run_k, "override the base-forest parameter k");
    run->add_option("--root", run_root, "BFS root vertex id (default: min id)");
    run->add_option("--round-cap", run_cap, "safety round cap");
    run->add_flag("--check-invariants", run_check, "attach the god-mode checker");
    run->add_option("--json-out", run_json, "write the RunReport as JSON");
    run->add_option("--mst-out", run_mst_out,
                    "write the computed MST as a sorted edge list");

    // ---- sweep ---------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "run a family x size x seed x b grid");
    std::vector<std::string> sw_families{"gnm_connected"};
    std::vector<std::int64_t> sw_ns{64, 128};
    std::vector<int> sw_bs{1};
    int sw_seeds = 5;
    std::int64_t sw_mmult = 4;
    std::string sw_json;
    bool sw_check = false;
    sweep->add_option("--families", sw_families, "families to sweep")->delimiter(',');
    sweep->add_option("--n-list", sw_ns, "sizes")->delimiter(',');
    sweep->add_option("--b-list", sw_bs, "bandwidth values")->delimiter(',');
    sweep->add_option("--seeds", sw_seeds, "seeds per cell (1..seeds)");
    sweep->add_option("--m-mult", sw_mmult, "gnm edge multiplier (m = mult*n)");
    sweep->add_flag("--check-invariants", sw_check, "attach the god-mode checker");
    sweep->add_option("--json-out", sw_json, "append JSON-lines reports here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto g = generate(gen_ff.resolve());
            if (gen_out.empty())
                write_edge_list(std::cout, g);
            else
                write_edge_list_file(gen_out, g);
            return 0;
        }

        if (*run) {
            WeightedGraph g = run_in.empty() ? generate(run_ff.resolve())
                                             : read_edge_list_file(run_in);
            RunInstanceOptions opts;
            opts.bandwidth = run_b;
            if (run_k > 0) opts.k_override = run_k;
            if (run_root >= 0) opts.root = run_root;
            opts.round_cap = run_cap;
            opts.check_invariants = run_check;
            std::string label = run_in.empty() ? run_ff.resolve().describe() : run_in;
            RunReport rep = run_instance(g, label, run_ff.seed, opts);
            std::cout << rep.to_json() << "\n";
            if (int rc = write_report(rep, run_json, false)) return rc;
            if (!run_mst_out.empty()) {
                std::ofstream mst(run_mst_out);
                if (!mst) {
                    std::cerr << "cannot open " << run_mst_out << "\n";
                    return 1;
                }
                for (const EdgeOrderKey& k : rep.mst_edges)
                    mst << k.lo << ' ' << k.hi << ' ' << k.w << "\n";
            }
            return report_exit(rep);
        }

        if (*sweep) {
            int exit_code = 0;
            double max_rr = 0, max_mr = 0;
            int cells = 0;
            for (const std::string& fam : sw_families)
                for (std::int64_t n : sw_ns)
                    for (int si = 1; si <= sw_seeds; ++si)
                        for (int b : sw_bs) {
                            FamilyFlags ff;
                            ff.family = fam;
                            ff.n = n;
                            ff.m = sw_mmult * n;
                            ff.seed = static_cast<std::uint64_t>(si);
                            if (fam == "grid") {
                                ff.rows = 1;
                                while ((ff.rows + 1) * (ff.rows + 1) <= n) ++ff.rows;
                                ff.cols = (n + ff.rows - 1) / ff.rows;
                            }
                            if (fam == "lollipop") {
                                ff.clique = std::max<std::int64_t>(2, n / 10);
                                ff.tail = n - ff.clique;
                            }
                            auto g = generate(ff.resolve());
                            RunInstanceOptions opts;
                            opts.bandwidth = b;
                            opts.check_invariants = sw_check;
                            RunReport rep =
                                run_instance(g, ff.resolve().describe(), ff.seed, opts);
                            if (int rc = write_report(rep, sw_json, true)) return rc;
                            max_rr = std::max(max_rr, rep.round_ratio);
                            max_mr = std::max(max_mr, rep.message_ratio);
                            ++cells;
                            exit_code = std::max(exit_code, report_exit(rep));
                            std::cout << rep.instance << " b=" << b
                                      << (rep.verified ? " ok" : " VERIFICATION FAILED")
                                      << "\n";
                        }
            std::cout << "{\"cells\":" << cells << ",\"max_round_ratio\":" << max_rr
                      << ",\"max_message_ratio\":" << max_mr << "}\n";
            return exit_code;
        }
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == GraphErrorKind::Io ? 1 : 1;
    } catch (const SimError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

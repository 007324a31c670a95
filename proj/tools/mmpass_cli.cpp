// Command-line front end.
//
//   mmpass analyze    NETWORK [--theta F|FILE] [--m M] [--k K] [--theta-c F] [--dump-lp PATH]
//                     [--schedule-out PATH] [--out PATH]
//   mmpass montecarlo [--n-relays N] [--trials T] [--theta F] [--cap-mean F] [--cap-var F]
//                     [--topology SPEC] [--seed S] [--min-he H] [--jobs J] [--timing]
//                     [--format csv|json] [--out PATH] [--summary PATH]
//   mmpass audit      SCHEDULE NETWORK [--theta F|FILE] [--out PATH]
//
// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 solver failure,
// 4 audit violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mmpass/mmpass.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kSolver = 3, kAudit = 4 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mmpass::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mmpass::ParseError("cannot write " + path);
    out << text;
}

// --theta accepts a scalar default or a JSON file
//   {"default": 0.2, "links": [{"tx": 0, "rx": 1, "theta": 0.3}, ...]}
// Precedence per link: theta file entry, then the network file, then the default.
mmpass::ThresholdMap resolve_thresholds(const mmpass::NetworkDocument& doc, const std::string& theta_arg) {
    double fallback = 1.0;
    nlohmann::json overrides;
    if (!theta_arg.empty()) {
        std::size_t used = 0;
        bool numeric = false;
        try {
            fallback = std::stod(theta_arg, &used);
            numeric = used == theta_arg.size();
        } catch (const std::exception&) {
        }
        if (!numeric) {
            fallback = 1.0;
            const auto text = read_file(theta_arg);
            try {
                overrides = nlohmann::json::parse(text);
            } catch (const nlohmann::json::parse_error& e) {
                throw mmpass::ParseError(theta_arg + ": " + e.what());
            }
            if (!overrides.is_object()) throw mmpass::ParseError(theta_arg + ": expected object");
            if (auto d = overrides.find("default"); d != overrides.end()) {
                if (!d->is_number()) throw mmpass::ParseError(theta_arg + ": default must be a number");
                fallback = d->get<double>();
            }
        }
    }
    if (!(fallback >= 0.0 && fallback <= 1.0)) throw mmpass::ValidationError({"default theta outside [0,1]"});

    auto values = doc.thresholds(fallback);
    std::vector<double> v(values.values().begin(), values.values().end());
    if (auto links = overrides.find("links"); !overrides.is_null() && links != overrides.end()) {
        for (std::size_t i = 0; i < links->size(); ++i) {
            const auto& e = (*links)[i];
            const std::string where = theta_arg + ": links[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("tx") || !e.contains("rx") || !e.contains("theta"))
                throw mmpass::ParseError(where + ": expected {tx, rx, theta}");
            const auto id = doc.network.find_link(e["tx"].get<int>(), e["rx"].get<int>());
            if (!id) throw mmpass::ValidationError({where + ": link not in network"});
            v[*id] = e["theta"].get<double>();
        }
    }
    mmpass::ThresholdMap th(std::move(v));
    mmpass::require_valid(th, doc.network);
    return th;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Passive-user capacity toolkit for full-duplex 1-2-1 mmWave relay networks"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Capacities, bounds, path counts and secure rates of one network");
    std::string a_network, a_theta, a_out, a_dump, a_format = "json";
    std::optional<int> a_m;
    int a_k = 0;
    double a_theta_c = 1.0;
    analyze->add_option("network", a_network, "Network JSON file")->required();
    analyze->add_option("--theta", a_theta, "Default threshold or threshold JSON file");
    analyze->add_option("--m", a_m, "Override the source/destination beam count");
    analyze->add_option("--k", a_k, "Number of wiretapped links")->check(CLI::NonNegativeNumber);
    analyze->add_option("--theta-c", a_theta_c, "Target fraction of the approximate capacity")
        ->check(CLI::Range(0.0, 1.0));
    std::string a_schedule;
    analyze->add_option("--schedule-out", a_schedule, "Write the passive-capacity beam schedule dump (M=1)");
    analyze->add_option("--dump-lp", a_dump, "Write the constrained edge-based program in LP format");
    analyze->add_option("--format", a_format, "Output format")->check(CLI::IsMember({"json"}));
    analyze->add_option("--out", a_out, "Output path (default stdout)");

    // montecarlo
    auto* mc = app.add_subcommand("montecarlo", "Capacity ratio study over redrawn link capacities");
    mmpass::MonteCarloConfig cfg;
    std::string m_topology = "layered", m_format = "csv", m_out, m_summary;
    mc->add_option("--n-relays", cfg.n_relays, "Number of relays")->check(CLI::NonNegativeNumber);
    mc->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
    mc->add_option("--theta", cfg.theta, "Uniform link threshold")->check(CLI::Range(0.0, 1.0));
    mc->add_option("--cap-mean", cfg.capacities.mean, "Gaussian capacity mean");
    mc->add_option("--cap-var", cfg.capacities.variance, "Gaussian capacity variance");
    mc->add_option("--topology", m_topology, "layered(...), complete-dag or parallel-paths(k)");
    mc->add_option("--seed", cfg.seed, "Master seed");
    mc->add_option("--min-he", cfg.min_edge_disjoint, "Regenerate the topology until it has this many edge-disjoint paths");
    mc->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    mc->add_flag("--timing", cfg.timing, "Add per-trial wall time to the CSV (breaks byte-identical output)");
    mc->add_option("--format", m_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    mc->add_option("--out", m_out, "Output path (default stdout)");
    mc->add_option("--summary", m_summary, "Also write the JSON summary here");

    // audit
    auto* audit = app.add_subcommand("audit", "Check a schedule dump against beam limits and thresholds");
    std::string u_schedule, u_network, u_theta, u_out;
    audit->add_option("schedule", u_schedule, "Schedule JSON file")->required();
    audit->add_option("network", u_network, "Network JSON file")->required();
    audit->add_option("--theta", u_theta, "Default threshold or threshold JSON file");
    audit->add_option("--out", u_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*analyze) {
            auto doc = mmpass::load_network(read_file(a_network));
            if (a_m) {
                if (*a_m < 1) throw mmpass::ValidationError({"--m must be >= 1"});
                doc.network = doc.network.with_beams(*a_m);
            }
            const auto th = resolve_thresholds(doc, a_theta);
            if (!a_dump.empty()) {
                if (doc.network.m_beams() != 1)
                    throw mmpass::InvalidArgument("--dump-lp needs M=1");
                write_output(a_dump, mmpass::to_lp_format(mmpass::build_p2(doc.network, th)));
            }
            const auto report = mmpass::analyze(doc.network, th, {a_k, a_theta_c});
            if (!a_schedule.empty()) {
                if (doc.network.m_beams() != 1) throw mmpass::InvalidArgument("--schedule-out needs M=1");
                const auto passive = mmpass::passive_capacity(doc.network, th);
                write_output(a_schedule,
                             mmpass::save_schedule(mmpass::schedule_from_activations(doc.network, passive.activations)));
            }
            write_output(a_out, report.dump(2) + "\n");
            return kOk;
        }
        if (*mc) {
            cfg.topology = mmpass::parse_topology(m_topology);
            const auto res = mmpass::run_montecarlo(cfg);
            const auto summary = mmpass::montecarlo_summary_json(res, cfg);
            if (m_format == "csv") {
                write_output(m_out, mmpass::montecarlo_csv(res, cfg.timing));
            } else {
                nlohmann::json records = nlohmann::json::array();
                for (const auto& r : res.records) {
                    nlohmann::json rec = {{"trial", r.trial},
                                          {"seed", r.seed},
                                          {"cbar", mmpass::round_real(r.cbar)},
                                          {"passive", mmpass::round_real(r.passive)},
                                          {"ratio", mmpass::round_real(r.ratio)},
                                          {"active_edge_disjoint", r.active_edge_disjoint}};
                    if (cfg.timing) rec["wall_ms"] = mmpass::round_real(r.wall_ms);
                    records.push_back(std::move(rec));
                }
                write_output(m_out, nlohmann::json{{"summary", summary}, {"records", records}}.dump(2) + "\n");
            }
            if (!m_summary.empty()) write_output(m_summary, summary.dump(2) + "\n");
            std::cerr << "trials=" << res.summary.trials << " mean_ratio=" << mmpass::format_real(res.summary.mean_ratio)
                      << " min_ratio=" << mmpass::format_real(res.summary.min_ratio)
                      << " max_ratio=" << mmpass::format_real(res.summary.max_ratio)
                      << " topology_H_e=" << res.topology_edge_disjoint << "\n";
            return kOk;
        }
        if (*audit) {
            const auto doc = mmpass::load_network(read_file(u_network));
            const auto th = resolve_thresholds(doc, u_theta);
            const auto schedule = mmpass::load_schedule(read_file(u_schedule));
            const auto rep = mmpass::audit_schedule(doc.network, th, schedule);
            write_output(u_out, mmpass::audit_json(rep).dump(2) + "\n");
            return rep.ok() ? kOk : kAudit;
        }
    } catch (const mmpass::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolver;
    } catch (const mmpass::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kUsage;
}

#include "codedfog/mapfn.hpp"
#include "codedfog/matmul.hpp"
#include "codedfog/placement.hpp"
#include "codedfog/shuffle.hpp"
#include "codedfog/straggler.hpp"
#include "codedfog/unified.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0DEDF06ULL;
constexpr const char* kVersion = "codedfog 1.0.0";

std::uint64_t resolve_seed(bool seedSet, std::uint64_t flagSeed) {
    if (seedSet) return flagSeed;
    if (const char* env = std::getenv("CODEDFOG_SEED")) {
        return std::strtoull(env, nullptr, 0);
    }
    return kDefaultSeed;
}

std::string fmt(double v) {
    std::ostringstream oss;
    oss.precision(12);
    oss << v;
    return oss.str();
}

codedfog::Rational parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const long long num = std::stoll(text.substr(0, slash));
        const long long den = std::stoll(text.substr(slash + 1));
        return codedfog::Rational(num, den);
    }
    // Decimal form: scale by a power of ten.
    const auto dot = text.find('.');
    if (dot == std::string::npos) return codedfog::Rational(std::stoll(text));
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    codedfog::BigInt den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return codedfog::Rational(codedfog::BigInt(digits), den);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

void echo_config(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv) {
    out << "# " << kVersion << "\n";
    for (const auto& [k, v] : kv) out << "# " << k << "=" << v << "\n";
}

/// Row-oriented result table rendered as CSV (config echoed as # comments)
/// or as a JSON object {"version", "config", "columns", "rows", "notes"}.
struct Table {
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    void emit(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            nlohmann::json j;
            j["version"] = kVersion;
            for (const auto& [k, v] : config) j["config"][k] = v;
            nlohmann::json rowArr = nlohmann::json::array();
            for (const auto& row : rows) {
                nlohmann::json obj;
                for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
                rowArr.push_back(obj);
            }
            j["rows"] = rowArr;
            if (!notes.empty()) j["notes"] = notes;
            out << j.dump(2) << "\n";
            return;
        }
        echo_config(out, config);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << (i ? "," : "") << columns[i];
        }
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << "\n";
        }
        for (const auto& note : notes) out << "# " << note << "\n";
    }
};

int cmd_mbc_load(int K, int rOnly, const std::string& outPath, const std::string& format) {
    Table table;
    table.config = {{"command", "mbc-load"}, {"nodes", std::to_string(K)}};
    table.columns = {"r", "uncoded", "uncoded_frac", "coded", "coded_frac"};
    const int lo = rOnly > 0 ? rOnly : 1;
    const int hi = rOnly > 0 ? rOnly : K;
    for (int r = lo; r <= hi; ++r) {
        const auto loads = codedfog::load_formula(K, r);
        table.rows.push_back({std::to_string(r), fmt(codedfog::to_double(loads.uncoded)),
                              codedfog::to_fraction_string(loads.uncoded),
                              fmt(codedfog::to_double(loads.coded)),
                              codedfog::to_fraction_string(loads.coded)});
    }
    std::ofstream file;
    table.emit(open_output(file, outPath), format);
    return 0;
}

int cmd_mbc_verify(int K, int r, std::int64_t N, std::int64_t Q, std::int64_t T,
                   std::uint64_t seed, bool perRecipient, const std::string& outPath,
                   const std::string& tracePath, const std::string& format) {
    codedfog::JobSpec spec{K, N, Q, r, T};
    try {
        spec.validate();
    } catch (const std::exception& e) {
        const auto batches = static_cast<std::int64_t>(codedfog::binomial(K, r));
        const std::int64_t nearestN = ((N + batches - 1) / batches) * batches;
        const std::int64_t nearestQ = ((Q + K - 1) / K) * K;
        std::cerr << "infeasible: " << e.what() << "\n"
                  << "nearest feasible: N=" << nearestN << " Q=" << nearestQ << "\n";
        return 2;
    }
    const auto plan = codedfog::build_placement(spec);
    const auto coded = codedfog::coded_shuffle(plan, seed);
    const auto uncoded = codedfog::uncoded_shuffle(plan);
    const auto formula = codedfog::load_formula(K, r);

    bool ok = coded.report.normalizedLoad == formula.coded &&
              uncoded.report.normalizedLoad == formula.uncoded;
    for (int node = 1; node <= K && ok; ++node) {
        const auto values = codedfog::decode_shuffle(node, coded.messages, plan, seed);
        for (const auto& v : values) {
            if (v.payload != codedfog::map_value(v.functionId, v.fileId, seed, T)) {
                ok = false;
                break;
            }
        }
    }

    Table table;
    table.config = {{"command", "mbc-verify"},
                    {"nodes", std::to_string(K)},
                    {"load", std::to_string(r)},
                    {"files", std::to_string(N)},
                    {"functions", std::to_string(Q)},
                    {"value_bits", std::to_string(T)},
                    {"seed", std::to_string(seed)},
                    {"accounting", perRecipient ? "per-recipient" : "multicast"}};
    table.columns = {"scheme",     "K",          "r",        "N",
                     "Q",          "T_bits",     "messages", "total_bits",
                     "normalized_load", "formula_load", "match"};
    codedfog::BigInt codedBits = coded.report.totalBitsSent;
    codedfog::Rational codedLoad = coded.report.normalizedLoad;
    if (perRecipient && r > 1) {
        codedBits *= r;
        codedLoad *= codedfog::Rational(r);
    }
    const auto row = [&](const char* scheme, std::int64_t messages, const codedfog::BigInt& bits,
                         const codedfog::Rational& measured, const codedfog::Rational& expected) {
        std::ostringstream bitsText;
        bitsText << bits;
        table.rows.push_back({scheme, std::to_string(K), std::to_string(r), std::to_string(N),
                              std::to_string(Q), std::to_string(T), std::to_string(messages),
                              bitsText.str(), codedfog::to_fraction_string(measured),
                              codedfog::to_fraction_string(expected), ok ? "yes" : "no"});
    };
    row("coded", coded.report.messageCount, codedBits, codedLoad, formula.coded);
    row("uncoded", uncoded.report.messageCount, uncoded.report.totalBitsSent,
        uncoded.report.normalizedLoad, formula.uncoded);
    std::ofstream file;
    table.emit(open_output(file, outPath), format);

    if (!tracePath.empty()) {
        std::ofstream trace(tracePath);
        codedfog::write_message_trace(trace, coded.messages);
    }
    if (!ok) std::cerr << "verification FAILED\n";
    return ok ? 0 : 1;
}

int cmd_mlc_sim(int n, int k, double shift, double rate, std::int64_t trials, std::uint64_t seed,
                const std::string& outPath, const std::string& format) {
    const codedfog::ShiftedExponential model{shift, rate};
    Table table;
    table.config = {{"command", "mlc-sim"},  {"nodes", std::to_string(n)},
                    {"tasks", std::to_string(k)}, {"shift", fmt(shift)},
                    {"rate", fmt(rate)},     {"trials", std::to_string(trials)},
                    {"seed", std::to_string(seed)}};
    table.columns = {"scheme", "n",       "k",         "s",      "lambda",
                     "analytic_mean", "mc_mean", "mc_stderr", "trials", "seed"};
    const auto emit = [&](const char* name, const codedfog::ExecutionScheme& scheme) {
        const auto est = codedfog::scheme_latency_mc(scheme, model, trials, seed);
        table.rows.push_back({name, std::to_string(scheme.n), std::to_string(scheme.k), fmt(shift),
                              fmt(rate), fmt(est.analyticMean), fmt(est.mcMean),
                              fmt(est.mcStdErr), std::to_string(est.trials),
                              std::to_string(seed)});
    };
    emit("uncoded", {codedfog::SchemeKind::Uncoded, n, n});
    if (n % k == 0) emit("repetition", {codedfog::SchemeKind::Repetition, n, k});
    emit("mds", {codedfog::SchemeKind::Mds, n, k});
    const auto best = codedfog::optimal_mds_k(n, model);
    table.notes.push_back("optimal_mds: k_star=" + std::to_string(best.kStar) +
                          " speedup=" + fmt(best.speedup));
    std::ofstream file;
    table.emit(open_output(file, outPath), format);
    return 0;
}

int cmd_matmul(std::int64_t rows, std::int64_t inner, std::int64_t cols, int n, int k,
               const std::vector<int>& stragglers, const std::string& mode, double shift,
               double rate, std::uint64_t seed, const std::string& outPath) {
    codedfog::MatMulJob job;
    job.A = codedfog::random_matrix(rows, inner, codedfog::derive_seed(seed, 1));
    job.X = codedfog::random_matrix(inner, cols, codedfog::derive_seed(seed, 2));
    job.n = n;
    job.k = k;
    job.model = {shift, rate};
    job.seed = seed;
    job.clock = mode == "wall" ? codedfog::ClockMode::Wall : codedfog::ClockMode::Simulated;
    job.forcedStragglers = stragglers;

    const auto report = codedfog::run_job(job);
    const auto direct = codedfog::multiply(job.A, job.X);
    const double err = codedfog::relative_error(report.result, direct);

    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = {{"rows", rows},     {"inner", inner}, {"cols", cols},
                   {"n", n},           {"k", k},         {"stragglers", stragglers},
                   {"mode", mode},     {"shift", shift}, {"rate", rate},
                   {"seed", seed}};
    j["makespan_s"] = report.makespan;
    j["relative_error"] = err;
    j["ill_conditioned"] = report.illConditioned;
    j["decoded_from"] = report.decodedFrom;
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : report.tasks) {
        const char* status = t.status == codedfog::TaskStatus::Completed ? "completed"
                           : t.status == codedfog::TaskStatus::Cancelled ? "cancelled"
                                                                         : "failed";
        tasks.push_back({{"index", t.codedIndex}, {"status", status}, {"wall_time_s", t.wallTime}});
    }
    j["tasks"] = tasks;

    std::ofstream file;
    auto& out = open_output(file, outPath);
    out << j.dump(2) << "\n";
    return err <= 1e-8 ? 0 : 1;
}

int cmd_unified(int K, const std::string& muText, std::int64_t m, int qOnly, double shift,
                double rate, double netBps, std::int64_t rows, int entryBits,
                const std::string& demandText, const std::string& normalize, int finisherSamples,
                std::uint64_t seed, const std::string& outPath, const std::string& summaryPath,
                const std::string& format) {
    codedfog::SweepConfig config;
    config.K = K;
    config.mu = parse_fraction(muText);
    config.m = m;
    config.model = {shift, rate};
    config.networkRateBps = netBps;
    config.rows = rows;
    config.entryBits = entryBits;
    config.demand = demandText == "client" ? codedfog::DemandModel::ClientCollects
                                           : codedfog::DemandModel::PeerReduce;
    config.finisherSamples = finisherSamples;
    config.seed = seed;

    const auto sweep = codedfog::tradeoff_sweep(config);
    if (qOnly > 0) {
        const auto qs = codedfog::feasible_q_values(K, config.mu, m);
        if (std::find(qs.begin(), qs.end(), qOnly) == qs.end()) {
            std::ostringstream list;
            for (std::size_t i = 0; i < qs.size(); ++i) list << (i ? "," : "") << qs[i];
            std::cerr << "infeasible q=" << qOnly << "; feasible: " << list.str() << "\n";
            return 2;
        }
    }

    Table table;
    table.config = {{"command", "unified"},
                    {"nodes", std::to_string(K)},
                    {"mu", muText},
                    {"tasks", std::to_string(m)},
                    {"shift", fmt(shift)},
                    {"rate", fmt(rate)},
                    {"net_bps", fmt(netBps)},
                    {"rows", std::to_string(rows)},
                    {"value_bits", std::to_string(entryBits)},
                    {"demand", demandText},
                    {"normalize", normalize},
                    {"seed", std::to_string(seed)}};
    table.columns = {"q", "map_latency_s", "normalized_load", "shuffle_time_s", "total_time_s",
                     "is_optimal"};
    for (const auto& p : sweep.points) {
        if (qOnly > 0 && p.q != qOnly) continue;
        // per-bit: fraction of all shuffled value bits; per-row: bits moved per output row
        codedfog::Rational load = p.normalizedLoad;
        if (normalize == "per-row") {
            load *= codedfog::Rational(entryBits);
        }
        table.rows.push_back({std::to_string(p.q), fmt(p.mapLatency),
                              fmt(codedfog::to_double(load)), fmt(p.shuffleTime), fmt(p.totalTime),
                              p.q == sweep.qStar ? "yes" : "no"});
    }
    std::ofstream file;
    table.emit(open_output(file, outPath), format);

    const auto* first = &sweep.points.front();
    const auto* last = &sweep.points.back();
    const auto* best = &sweep.points.front();
    for (const auto& p : sweep.points) {
        if (p.q == sweep.qStar) best = &p;
    }
    nlohmann::json summary;
    summary["version"] = kVersion;
    summary["q_star"] = sweep.qStar;
    summary["total_time_q_star_s"] = best->totalTime;
    summary["total_time_q_min_s"] = first->totalTime;
    summary["total_time_q_max_s"] = last->totalTime;
    summary["gain_over_q_max_pct"] = 100.0 * (1.0 - best->totalTime / last->totalTime);
    summary["gain_over_q_min_pct"] = 100.0 * (1.0 - best->totalTime / first->totalTime);
    if (summaryPath.empty()) {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::ofstream sfile(summaryPath);
        sfile << summary.dump(2) << "\n";
    }
    return 0;
}

int cmd_rstar(double tTask, double tData, int K) {
    const auto choice = codedfog::optimal_computation_load(tTask, tData, K);
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = {{"task_time_s", tTask}, {"data_time_s", tData}, {"nodes", K}};
    j["r_continuous"] = choice.continuous;
    j["r_star"] = choice.rStar;
    j["total_coded_s"] = choice.totalCoded;
    j["total_uncoded_s"] = choice.totalUncoded;
    j["speedup"] = choice.totalUncoded / choice.totalCoded;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coded distributed computing toolkit: bandwidth-minimal shuffles, "
                 "straggler-tolerant MDS execution, and the latency-load tradeoff"};
    app.require_subcommand(1);

    std::uint64_t seed = kDefaultSeed;
    bool seedSet = false;

    std::string format = "csv";

    // mbc-load
    int K = 10, r = 0;
    std::string outPath;
    auto* load = app.add_subcommand("mbc-load", "Coded vs uncoded shuffle load curve");
    load->add_option("--nodes", K, "node count K")->required();
    load->add_option("--load", r, "restrict to a single computation load r");
    load->add_option("--out", outPath, "output path (default stdout)");
    load->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // mbc-verify
    int vK = 3, vr = 2;
    std::int64_t vN = 6, vQ = 3, vT = 8;
    bool perRecipient = false;
    std::string tracePath;
    std::string verifyOut;
    auto* verify = app.add_subcommand("mbc-verify", "End-to-end coded shuffle verification");
    verify->add_option("--nodes", vK)->required();
    verify->add_option("--load", vr)->required();
    verify->add_option("--files", vN)->required();
    verify->add_option("--functions", vQ)->required();
    verify->add_option("--value-bits", vT);
    verify->add_flag("--per-recipient", perRecipient, "count multicast bits once per recipient");
    verify->add_option("--trace", tracePath, "write JSONL message trace");
    verify->add_option("--out", verifyOut, "output path (default stdout)");
    verify->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--seed", seed)->each([&](const std::string&) { seedSet = true; });

    // mlc-sim
    int sn = 10, sk = 5;
    double shift = 1.0, rate = 1.0;
    std::int64_t trials = 100000;
    std::string simOut;
    auto* sim = app.add_subcommand("mlc-sim", "Straggler latency: analytic vs Monte Carlo");
    sim->add_option("--nodes", sn)->required();
    sim->add_option("--tasks", sk)->required();
    sim->add_option("--shift", shift);
    sim->add_option("--rate", rate);
    sim->add_option("--trials", trials);
    sim->add_option("--out", simOut);
    sim->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--seed", seed)->each([&](const std::string&) { seedSet = true; });

    // matmul
    std::int64_t mmRows = 60, mmInner = 40, mmCols = 8;
    int mmN = 3, mmK = 2;
    std::vector<int> stragglers;
    std::string mode = "sim", mmOut;
    double mmShift = 1.0, mmRate = 1.0;
    auto* mm = app.add_subcommand("matmul", "Coded matrix multiplication demo");
    mm->add_option("--rows", mmRows, "rows of A");
    mm->add_option("--inner", mmInner, "cols of A / rows of X");
    mm->add_option("--cols", mmCols, "cols of X");
    mm->add_option("--code-n", mmN);
    mm->add_option("--code-k", mmK);
    mm->add_option("--stragglers", stragglers, "forced straggler coded indices (0-based)");
    mm->add_option("--mode", mode)->check(CLI::IsMember({"sim", "wall"}));
    mm->add_option("--shift", mmShift);
    mm->add_option("--rate", mmRate);
    mm->add_option("--out", mmOut);
    mm->add_option("--seed", seed)->each([&](const std::string&) { seedSet = true; });

    // unified
    int uK = 18;
    std::string muText = "1/3";
    std::int64_t um = 185640, uRows = 1000000;
    double uShift = 1.0, uRate = 1.0, netBps = 10e6;
    int entryBits = 16, finisherSamples = 64;
    std::string demandText = "peer", normalize = "per-bit", uOut, uSummary;
    auto* uni = app.add_subcommand("unified", "Latency-load tradeoff sweep");
    int uQ = 0;
    uni->add_option("--nodes", uK);
    uni->add_option("--mu", muText, "storage fraction, e.g. 1/3");
    uni->add_option("--tasks", um, "source Map task count m");
    uni->add_option("--q", uQ, "emit only this q (must be feasible)");
    uni->add_option("--shift", uShift);
    uni->add_option("--rate", uRate);
    uni->add_option("--net-bps", netBps);
    uni->add_option("--rows", uRows);
    uni->add_option("--value-bits", entryBits);
    uni->add_option("--demand", demandText)->check(CLI::IsMember({"peer", "client"}));
    uni->add_option("--normalize", normalize)->check(CLI::IsMember({"per-bit", "per-row"}));
    uni->add_option("--finisher-samples", finisherSamples);
    uni->add_option("--out", uOut);
    uni->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    uni->add_option("--summary", uSummary, "summary JSON path (default stdout)");
    uni->add_option("--seed", seed)->each([&](const std::string&) { seedSet = true; });

    // rstar
    double tTask = 1.0, tData = 100.0;
    int rK = 16;
    auto* rs = app.add_subcommand("rstar", "Optimal computation load for Map+Shuffle time");
    rs->add_option("--task-time", tTask)->required();
    rs->add_option("--data-time", tData)->required();
    rs->add_option("--nodes", rK);

    CLI11_PARSE(app, argc, argv);

    try {
        const std::uint64_t resolved = resolve_seed(seedSet, seed);
        if (load->parsed()) return cmd_mbc_load(K, r, outPath, format);
        if (verify->parsed()) {
            return cmd_mbc_verify(vK, vr, vN, vQ, vT, resolved, perRecipient, verifyOut, tracePath,
                                  format);
        }
        if (sim->parsed()) {
            return cmd_mlc_sim(sn, sk, shift, rate, trials, resolved, simOut, format);
        }
        if (mm->parsed()) {
            return cmd_matmul(mmRows, mmInner, mmCols, mmN, mmK, stragglers, mode, mmShift, mmRate,
                              resolved, mmOut);
        }
        if (uni->parsed()) {
            return cmd_unified(uK, muText, um, uQ, uShift, uRate, netBps, uRows, entryBits,
                               demandText, normalize, finisherSamples, resolved, uOut, uSummary,
                               format);
        }
        if (rs->parsed()) return cmd_rstar(tTask, tData, rK);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "ctv/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fmt/format.h>
#include <fnmatch.h>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <signal.h>
#include <spawn.h>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include "ctv/synth.hpp"

extern char** environ;

namespace ctv::cli {
namespace fs = std::filesystem;

namespace {

// Raised inside subcommands; carries the exit code.
struct Failure : std::runtime_error {
    Failure(Exit code, const std::string& what) : std::runtime_error(what), code(code) {}
    Exit code;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Failure(Exit::MissingInput, fmt::format("cannot read {}", p.string()));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& p, std::string_view text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Failure(Exit::Error, fmt::format("cannot write {}", p.string()));
}

bool matches(const std::string& glob, const std::string& id) {
    return glob.empty() || fnmatch(glob.c_str(), id.c_str(), 0) == 0;
}

Manifest filtered(Manifest m, const std::string& glob) {
    std::erase_if(m.cases, [&](const BenchmarkCase& c) { return !matches(glob, c.case_id); });
    return m;
}

DistinguishabilityMatrix load_matrix(const std::string& path) {
    if (path.empty()) return DistinguishabilityMatrix::ideal();
    if (path == "ideal") return DistinguishabilityMatrix::ideal();
    if (path == "nothing") return DistinguishabilityMatrix::nothing();
    try {
        return DistinguishabilityMatrix::from_text(read_file(path));
    } catch (const Failure&) {
        throw;
    } catch (const std::exception& e) {
        throw Failure(Exit::Error, fmt::format("{}: {}", path, e.what()));
    }
}

Manifest load_manifest(const std::string& path) {
    try {
        return parse_manifest(read_file(path));
    } catch (const Failure&) {
        throw;
    } catch (const std::exception& e) {
        throw Failure(Exit::Error, fmt::format("{}: {}", path, e.what()));
    }
}

// Sample files: a single file, or every *.csv in a directory (sorted).
std::vector<Sample> load_samples(const fs::path& path) {
    if (!fs::exists(path)) throw Failure(Exit::MissingInput, fmt::format("no samples at {}", path.string()));
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.path().extension() == ".csv") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    std::vector<Sample> out;
    for (const auto& f : files) {
        try {
            auto part = parse_samples(read_file(f));
            out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        } catch (const Failure&) {
            throw;
        } catch (const std::exception& e) {
            throw Failure(Exit::Error, fmt::format("{}: {}", f.string(), e.what()));
        }
    }
    return out;
}

// "case_id, status" lines written by the runner.
std::map<std::string, std::string> load_coverage(const fs::path& dir) {
    std::map<std::string, std::string> out;
    auto path = dir / "coverage.txt";
    if (!fs::is_directory(dir) || !fs::exists(path)) return out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        auto status = line.substr(comma + 1);
        status.erase(0, status.find_first_not_of(' '));
        out[line.substr(0, comma)] = status;
    }
    return out;
}

void check_alpha(double alpha) {
    if (!(alpha > 0 && alpha < 0.5)) throw Failure(Exit::Usage, "--alpha must lie in (0, 0.5)");
}

std::string samples_text(const std::vector<Sample>& samples) {
    std::string out;
    for (const auto& s : samples) out += format_sample(s) + "\n";
    return out;
}

// Exit code of a child, or nullopt when the deadline passed (the child is killed).
std::optional<int> run_program(const std::vector<std::string>& argv, std::chrono::seconds timeout) {
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    pid_t pid = 0;
    if (posix_spawn(&pid, cargv[0], nullptr, nullptr, cargv.data(), environ) != 0) return 127;
    auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        int status = 0;
        pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
        if (r < 0) return 127;
        if (std::chrono::steady_clock::now() > deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            return std::nullopt;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

struct Options {
    std::string manifest, out, topology, only, samples, matrix, verdicts, bin, synthetic = "null";
    std::optional<int> run_num;
    double alpha = kDefaultAlpha;
    bool skip_secondary = false, plan = false, validation = false, null_samples = false;
    std::uint64_t seed = 1;
    int timeout = 600;
};

int cmd_derive(const Options& o, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = derive_catalog(load_matrix(o.matrix));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.out.empty()) {
        write_file(fs::path(o.out) / "catalog.json", catalog_json(result));
        write_file(fs::path(o.out) / "catalog.txt", catalog_text(result.strong));
        std::string weak;
        for (const auto& p : result.weak) weak += format_pattern(p) + "\n";
        write_file(fs::path(o.out) / "weak.txt", weak);
    }
    out << fmt::format("{} Strong, {} Weak, {}\n", result.strong.size(), result.weak.size(),
                       result.diff.empty() ? "diff empty" : fmt::format("diff {} lines", result.diff.size()));
    out << fmt::format("raw: {} Strong, {} Weak of {} patterns; {} Strong demoted by mismatched probes\n",
                       result.raw_count(Effectiveness::Strong), result.raw_count(Effectiveness::Weak), kPatternCount,
                       result.demoted.size());
    for (const auto& [k, v] : category_histogram(result.strong)) out << fmt::format("{} {}\n", k, v);
    out << fmt::format("time {:.2f} s\n", secs);
    for (const auto& d : result.diff) out << d << "\n";
    return static_cast<int>(result.diff.empty() ? Exit::Ok : Exit::CatalogDiff);
}

int cmd_catalog(const Options& o, std::ostream& out) {
    if (o.matrix.empty()) out << catalog_text(golden_catalog());
    else out << catalog_text(predict_effective(load_matrix(o.matrix)));
    return 0;
}

int cmd_gen(const Options& o, std::ostream& out) {
    ManifestParams params;
    if (o.run_num) params.run_num = *o.run_num;
    params.alpha = o.alpha;
    Manifest m;
    if (o.validation) {
        m = emit_validation_suite(params);
    } else {
        auto result = derive_catalog();
        try {
            m = expand_cases(result.strong, params);
        } catch (const CatalogMismatch& e) {
            throw Failure(Exit::CatalogDiff, e.what());
        }
    }
    m = filtered(std::move(m), o.only);
    fs::path dir(o.out);
    write_file(dir / "manifest.txt", manifest_text(m));
    write_file(dir / "include" / "ctv_harness.h", harness_header_text());
    for (const auto& c : m.cases) write_file(dir / "src" / (c.case_id + ".c"), emit_benchmark_source(c, params));
    out << fmt::format("manifest of {} cases written to {}\n", m.cases.size(), (dir / "manifest.txt").string());
    return 0;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
    if (o.plan) {
        auto text = calibration_plan_text(calibration_plan());
        if (o.out.empty()) out << text;
        else write_file(fs::path(o.out) / "calibration_plan.txt", text);
        return 0;
    }
    if (o.samples.empty()) throw Failure(Exit::Usage, "calibrate needs --plan or --samples");
    std::map<int, std::vector<double>> samples;
    try {
        samples = parse_calibration_samples(read_file(o.samples));
    } catch (const Failure&) {
        throw;
    } catch (const std::exception& e) {
        throw Failure(Exit::Error, fmt::format("{}: {}", o.samples, e.what()));
    }
    auto cal = calibrate(samples, o.alpha);
    std::string means = "class_id, count, mean_cycles\n";
    for (const auto& h : cal.histograms) means += fmt::format("{}, {}, {:.2f}\n", h.timing.id(), h.count, h.mean);
    fs::path dir(o.out.empty() ? "." : o.out);
    write_file(dir / "histograms.csv", histograms_csv(cal.histograms));
    write_file(dir / "matrix.txt", cal.matrix.to_text());
    write_file(dir / "means.csv", means);
    int separable = 0;
    for (int i = 1; i <= kTimingClassCount; ++i)
        for (int j = i + 1; j <= kTimingClassCount; ++j)
            separable += cal.matrix.distinguishable(TimingClass(i), TimingClass(j)) ? 1 : 0;
    out << fmt::format("{} classes measured, {} of {} pairs separable\n", cal.histograms.size(), separable,
                       kTimingClassCount * (kTimingClassCount - 1) / 2);
    return 0;
}

int cmd_run(const Options& o, std::ostream& out) {
    auto topo = Topology::from_json(read_file(o.topology));
    try {
        topo.check();
    } catch (const std::exception& e) {
        throw Failure(Exit::TopologyMismatch, e.what());
    }
    auto m = filtered(load_manifest(o.manifest), o.only);
    int run_num = o.run_num.value_or(m.params.run_num);
    fs::path dir(o.out), bin(o.bin);
    fs::create_directories(dir / "samples");
    std::string log = "# case_id, status\n";
    std::map<std::string, int> tally;
    for (const auto& c : m.cases) {
        auto exe = bin / c.case_id;
        std::string status;
        if (!fs::exists(exe)) {
            status = "missing";
        } else {
            auto code = run_program({exe.string(), "--out", (dir / "samples" / (c.case_id + ".csv")).string(),
                                     "--threads", topo.threads_arg(), "--run-num", std::to_string(run_num)},
                                    std::chrono::seconds(o.timeout));
            status = code ? std::string(run_status_name(run_status_from_exit(*code)))
                          : std::string(run_status_name(RunStatus::Timeout));
        }
        ++tally[status];
        log += fmt::format("{}, {}\n", c.case_id, status);
    }
    write_file(dir / "samples" / "coverage.txt", log);
    for (const auto& [k, v] : tally) out << fmt::format("{} {}\n", k, v);
    return 0;
}

std::vector<CaseVerdict> judge_all(const Manifest& m, const std::vector<Sample>& samples,
                                   const std::map<std::string, std::string>& coverage, int run_num, double alpha) {
    auto sets = group_samples(samples, run_num);
    std::vector<CaseVerdict> out;
    for (const auto& c : m.cases) {
        auto it = sets.find(c.case_id);
        if (it == sets.end()) {
            CaseVerdict v;
            v.case_id = c.case_id;
            auto cov = coverage.find(c.case_id);
            bool skipped = cov != coverage.end() && cov->second.rfind("SKIP", 0) == 0;
            v.verdict = skipped ? Verdict::Skipped : Verdict::Incomplete;
            v.note = cov != coverage.end() ? cov->second : "no samples";
            out.push_back(std::move(v));
            continue;
        }
        out.push_back(judge_case(it->second, c.u_last_step(), alpha));
    }
    return out;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    check_alpha(o.alpha);
    auto m = filtered(load_manifest(o.manifest), o.only);
    auto verdicts = judge_all(m, load_samples(o.samples), load_coverage(o.samples),
                              o.run_num.value_or(m.params.run_num), o.alpha);
    std::map<Verdict, int> tally;
    for (const auto& v : verdicts) ++tally[v.verdict];
    write_file(fs::path(o.out.empty() ? "." : o.out) / "verdicts.csv", verdicts_csv(verdicts));
    for (const auto& [k, v] : tally) out << fmt::format("{} {}\n", verdict_name(k), v);
    return 0;
}

int cmd_score(const Options& o, std::ostream& out) {
    auto m = load_manifest(o.manifest);
    std::vector<CaseVerdict> verdicts;
    try {
        verdicts = parse_verdicts_csv(read_file(o.verdicts));
    } catch (const Failure&) {
        throw;
    } catch (const std::exception& e) {
        throw Failure(Exit::Error, fmt::format("{}: {}", o.verdicts, e.what()));
    }
    auto report = ctvs(verdicts, m);
    out << report.text();
    if (!o.out.empty()) write_file(fs::path(o.out) / "ctvs.csv", report.csv());
    return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
    auto m = filtered(load_manifest(o.manifest), o.only);
    SynthParams params;
    params.run_num = o.run_num.value_or(m.params.run_num);
    params.seed = o.seed;
    auto dm = load_matrix(o.matrix);
    Simulator sim;
    fs::path dir(o.out);
    fs::create_directories(dir);
    int strong = 0;
    for (const auto& c : m.cases) {
        SampleSet s;
        if (o.null_samples) {
            s = synthesize_null(c, params);
        } else {
            auto pred = predict_case(c, dm, sim);
            strong += pred.strong() ? 1 : 0;
            s = synthesize(c, pred, params);
        }
        write_file(dir / (c.case_id + ".csv"), samples_text(to_samples(s)));
    }
    out << fmt::format("{} cases synthesized ({}), {} predicted Strong\n", m.cases.size(),
                       o.null_samples ? "null" : "model", strong);
    return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
    check_alpha(o.alpha);
    if (o.samples.empty() && !o.skip_secondary)
        throw Failure(Exit::MissingInput, "validate needs --samples from a hardware run, or --skip-secondary");
    if (o.synthetic != "null" && o.synthetic != "model") throw Failure(Exit::Usage, "--synthetic is null or model");
    ManifestParams params;
    if (o.run_num) params.run_num = *o.run_num;
    params.alpha = o.alpha;
    auto suite = filtered(emit_validation_suite(params), o.only);
    auto raw = derive_catalog().raw;
    double corrected = o.alpha / static_cast<double>(std::max<std::size_t>(1, suite.cases.size()));

    std::vector<CaseVerdict> at_raw, at_corrected;
    if (!o.samples.empty()) {
        auto samples = load_samples(o.samples);
        auto coverage = load_coverage(o.samples);
        at_raw = judge_all(suite, samples, coverage, params.run_num, o.alpha);
        at_corrected = judge_all(suite, samples, coverage, params.run_num, corrected);
    } else {
        SynthParams sp;
        sp.run_num = params.run_num;
        sp.seed = o.seed;
        auto dm = load_matrix(o.matrix);
        Simulator sim;
        for (const auto& c : suite.cases) {
            auto s = o.synthetic == "null" ? synthesize_null(c, sp) : synthesize(c, predict_case(c, dm, sim), sp);
            at_raw.push_back(judge_case(s, c.u_last_step(), o.alpha));
            at_corrected.push_back(judge_case(s, c.u_last_step(), corrected));
        }
    }
    at_raw = false_positive_screen(std::move(at_raw), suite);
    at_corrected = false_positive_screen(std::move(at_corrected), suite);
    auto summary = summarize_validation(suite, at_raw, at_corrected, raw, corrected);
    if (!o.out.empty()) {
        fs::path dir(o.out);
        write_file(dir / "validation_manifest.txt", manifest_text(suite));
        write_file(dir / "verdicts.csv", verdicts_csv(at_corrected));
        write_file(dir / "summary.txt", summary.text());
    }
    out << summary.text();
    return static_cast<int>(summary.uncovered.empty() ? Exit::Ok : Exit::ValidationUncovered);
}

int cmd_topology(const Options& o, std::ostream& out) {
    if (o.topology.empty()) {
        out << Topology::detect().to_json() << "\n";
        return 0;
    }
    auto topo = Topology::from_json(read_file(o.topology));
    try {
        topo.check();
    } catch (const std::exception& e) {
        throw Failure(Exit::TopologyMismatch, e.what());
    }
    out << fmt::format("topology ok: {} cores, smt {}, threads {}\n", topo.cores.size(), topo.smt ? "yes" : "no",
                       topo.threads_arg());
    return 0;
}

}  // namespace

void Topology::check() const {
    if (cores.empty()) throw std::runtime_error("topology declares no cores");
    std::set<int> ids, threads;
    for (const auto& c : cores) {
        if (!ids.insert(c.id).second) throw std::runtime_error(fmt::format("core {} declared twice", c.id));
        if (c.threads.empty()) throw std::runtime_error(fmt::format("core {} has no threads", c.id));
        for (int t : c.threads) {
            if (t < 0) throw std::runtime_error(fmt::format("core {} lists negative thread {}", c.id, t));
            if (!threads.insert(t).second)
                throw std::runtime_error(fmt::format("thread {} assigned to more than one core", t));
        }
        if (!smt && c.threads.size() > 1)
            throw std::runtime_error(fmt::format("core {} has {} threads but smt is false", c.id, c.threads.size()));
    }
    if (smt && std::none_of(cores.begin(), cores.end(), [](const auto& c) { return c.threads.size() > 1; }))
        throw std::runtime_error("smt is true but no core has a sibling thread");
}

std::string Topology::threads_arg() const {
    auto thread = [&](std::size_t core, std::size_t i) {
        return core < cores.size() && i < cores[core].threads.size() ? cores[core].threads[i] : -1;
    };
    return fmt::format("{},{},{},{}", thread(0, 0), thread(0, 1), thread(1, 0), thread(1, 1));
}

std::string Topology::to_json() const {
    nlohmann::json j;
    j["smt"] = smt;
    j["cores"] = nlohmann::json::array();
    for (const auto& c : cores) j["cores"].push_back({{"id", c.id}, {"threads", c.threads}});
    return j.dump(2);
}

Topology Topology::from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        Topology t;
        t.smt = j.at("smt").get<bool>();
        for (const auto& c : j.at("cores"))
            t.cores.push_back(CoreThreads{c.at("id").get<int>(), c.at("threads").get<std::vector<int>>()});
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Failure(Exit::TopologyMismatch, fmt::format("topology: {}", e.what()));
    }
}

Topology Topology::detect() {
    std::map<std::pair<int, int>, std::vector<int>> by_core;
    for (int cpu = 0;; ++cpu) {
        fs::path base = fmt::format("/sys/devices/system/cpu/cpu{}/topology", cpu);
        if (!fs::exists(base)) break;
        auto read_int = [&](const char* name) {
            std::ifstream in(base / name);
            int v = 0;
            in >> v;
            return v;
        };
        by_core[{read_int("physical_package_id"), read_int("core_id")}].push_back(cpu);
    }
    Topology t;
    int id = 0;
    for (auto& [key, threads] : by_core) {
        t.smt = t.smt || threads.size() > 1;
        t.cores.push_back(CoreThreads{id++, threads});
    }
    return t;
}

std::string_view run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Ok: return "ok";
        case RunStatus::Usage: return "usage-error";
        case RunStatus::SkipSchedule: return "SKIP-schedule";
        case RunStatus::SkipCapability: return "SKIP-capability";
        case RunStatus::SequenceTimeout: return "sequencing-timeout";
        case RunStatus::Timeout: return "timeout";
        case RunStatus::Failed: return "failed";
    }
    return "?";
}

RunStatus run_status_from_exit(int code) {
    switch (static_cast<ProgramExit>(code)) {
        case ProgramExit::Ok: return RunStatus::Ok;
        case ProgramExit::Usage: return RunStatus::Usage;
        case ProgramExit::SkipSchedule: return RunStatus::SkipSchedule;
        case ProgramExit::SkipCapability: return RunStatus::SkipCapability;
        case ProgramExit::SequenceTimeout: return RunStatus::SequenceTimeout;
    }
    return RunStatus::Failed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cache timing vulnerability derivation, benchmark generation and scoring", "ctvs"};
    app.require_subcommand(1);
    Options o;

    auto add_alpha = [&](CLI::App* s) {
        s->add_option("--alpha", o.alpha, "Significance level per pairwise test");
    };
    auto* derive = app.add_subcommand("derive", "Classify all patterns and diff the Strong catalog");
    derive->add_option("--out", o.out, "Directory for catalog.json, catalog.txt, weak.txt");
    derive->add_option("--matrix", o.matrix, "Distinguishability matrix file, or ideal / nothing");

    auto* catalog = app.add_subcommand("catalog", "Print the Strong catalog");
    catalog->add_option("--matrix", o.matrix, "Only records still Strong under this matrix");

    auto* gen = app.add_subcommand("gen", "Expand the catalog into benchmark cases and sources");
    gen->add_option("--out", o.out, "Output directory")->required();
    gen->add_option("--run-num", o.run_num, "Trials per candidate");
    gen->add_option("--only", o.only, "Case id glob");
    gen->add_flag("--validation", o.validation, "Emit the full validation suite instead");
    add_alpha(gen);

    auto* cal = app.add_subcommand("calibrate", "Calibration plan, or histograms and matrix from probe samples");
    cal->add_flag("--plan", o.plan, "Print state-preparation sequences per timing class");
    cal->add_option("--samples", o.samples, "Lines 'class_id, trial_index, cycles'");
    cal->add_option("--out", o.out, "Output directory");
    add_alpha(cal);

    auto* run = app.add_subcommand("run", "Run compiled cases and collect samples");
    run->add_option("--manifest", o.manifest)->required();
    run->add_option("--bin", o.bin, "Directory of compiled case programs named by case id")->required();
    run->add_option("--topology", o.topology, "Declared topology JSON")->required();
    run->add_option("--out", o.out, "Output directory")->required();
    run->add_option("--run-num", o.run_num);
    run->add_option("--only", o.only, "Case id glob");
    run->add_option("--timeout", o.timeout, "Seconds per case");

    auto* analyze = app.add_subcommand("analyze", "Judge every manifest case from samples");
    analyze->add_option("--manifest", o.manifest)->required();
    analyze->add_option("--samples", o.samples, "Sample file or directory")->required();
    analyze->add_option("--out", o.out, "Directory for verdicts.csv");
    analyze->add_option("--run-num", o.run_num);
    analyze->add_option("--only", o.only, "Case id glob");
    analyze->add_flag("--skip-secondary", o.skip_secondary, "Samples are pre-recorded; no harness needed");
    add_alpha(analyze);

    auto* score = app.add_subcommand("score", "CTVS report from verdicts");
    score->add_option("--manifest", o.manifest)->required();
    score->add_option("--verdicts", o.verdicts)->required();
    score->add_option("--out", o.out, "Directory for ctvs.csv");

    auto* synth = app.add_subcommand("synth", "Synthesize samples from simulator predictions");
    synth->add_option("--manifest", o.manifest)->required();
    synth->add_option("--out", o.out, "Sample directory")->required();
    synth->add_option("--matrix", o.matrix, "Distinguishability matrix file, or ideal / nothing");
    synth->add_option("--run-num", o.run_num);
    synth->add_option("--only", o.only, "Case id glob");
    synth->add_option("--seed", o.seed);
    synth->add_flag("--null", o.null_samples, "All candidates share one distribution");

    auto* validate = app.add_subcommand("validate", "Judge all patterns and check coverage by the catalog");
    validate->add_option("--samples", o.samples, "Sample file or directory from a hardware run");
    validate->add_flag("--skip-secondary", o.skip_secondary, "Use synthetic samples instead of a hardware run");
    validate->add_option("--synthetic", o.synthetic, "null or model");
    validate->add_option("--matrix", o.matrix, "Matrix for --synthetic model");
    validate->add_option("--out", o.out, "Output directory");
    validate->add_option("--run-num", o.run_num);
    validate->add_option("--only", o.only, "Case id glob");
    validate->add_option("--seed", o.seed);
    add_alpha(validate);

    auto* topology = app.add_subcommand("topology", "Print the detected topology, or check a declared one");
    topology->add_option("--topology", o.topology, "Declared topology JSON to check");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(Exit::Usage);
    }

    try {
        if (*derive) return cmd_derive(o, out);
        if (*catalog) return cmd_catalog(o, out);
        if (*gen) return cmd_gen(o, out);
        if (*cal) return cmd_calibrate(o, out);
        if (*run) return cmd_run(o, out);
        if (*analyze) return cmd_analyze(o, out);
        if (*score) return cmd_score(o, out);
        if (*synth) return cmd_synth(o, out);
        if (*validate) return cmd_validate(o, out);
        if (*topology) return cmd_topology(o, out);
    } catch (const Failure& f) {
        err << "ctvs: " << f.what() << "\n";
        return static_cast<int>(f.code);
    } catch (const std::exception& e) {
        err << "ctvs: " << e.what() << "\n";
        return static_cast<int>(Exit::Error);
    }
    return static_cast<int>(Exit::Usage);
}

}  // namespace ctv::cli

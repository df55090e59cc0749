#include "ctv/casegen.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <set>
#include <sstream>

namespace ctv {
namespace {

std::vector<StepOp> case_choices(State s) {
    switch (kind_of(s)) {
        case StepKind::Access: return {StepOp::Read, StepOp::Write};
        case StepKind::Invalidate: return {StepOp::Flush, StepOp::RemoteWrite};
        case StepKind::Star: return {StepOp::Unknown};
    }
    return {};
}

std::vector<std::string> tags_for(const Pattern& p) {
    std::vector<std::string> tags;
    if (known_approximation(p)) tags.emplace_back(kTagApprox);
    if (is_secret(p[2])) tags.emplace_back(kTagULast);
    return tags;
}

void expand_pattern(std::vector<BenchmarkCase>& out, int number, const Pattern& p) {
    for (const auto& v : case_variants(p))
        for (auto s : schedules_for(p, v))
            out.push_back(BenchmarkCase{case_id_for(number, p, v, s), number, p, v, s, tags_for(p)});
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

const char* const kRules =
    "ops access={R,W} invalidate={F,RW} whole-cache={flush-all,remote-write-all} unknown={X}; "
    "placement steps1-2 RW->remote, step3 F->remote, else local; "
    "schedule VO if all actors victim, TS+HT if a core hosts both actors, else DC";

// Emission helpers -------------------------------------------------------

struct Process {
    Actor actor;
    Core core;
    int slot = 0;  // index into the harness thread slots
};

const char* c_kind(StepOp op) {
    switch (op) {
        case StepOp::Read: return "CTV_READ";
        case StepOp::Write:
        case StepOp::RemoteWrite: return "CTV_WRITE";
        case StepOp::Flush: return "CTV_FLUSH";
        case StepOp::Unknown: break;
    }
    return "CTV_READ";
}

std::string c_addr(State s) {
    switch (tag_of(s)) {
        case AddressTag::A_known: return "CTV_ADDR_A";
        case AddressTag::A_alias: return "CTV_ADDR_ALIAS";
        case AddressTag::D_known: return "CTV_ADDR_D";
        case AddressTag::U_secret: return "ctv_u_target(cand)";
        default: break;
    }
    return "CTV_ADDR_DUMMY";
}

std::string step_statement(State s, StepOp op) {
    if (s == State::Star) return "ctv_scramble(ctx); /* approximation: unknown prior contents */";
    if (is_whole_cache(s)) {
        if (op == StepOp::RemoteWrite)
            return "ctv_write_all(ctx); /* approximation: whole-cache invalidation by remote writes */";
        return "ctv_flush_all(ctx); /* approximation: whole-cache invalidation as per-line flushes */";
    }
    return fmt::format("ctv_op(ctx, {}, {});", c_kind(op), c_addr(s));
}

std::string timed_expression(State s, StepOp op) {
    if (s == State::Star) return "ctv_timed_scramble(ctx) /* approximation: unknown prior contents */";
    if (is_whole_cache(s)) {
        if (op == StepOp::RemoteWrite)
            return "ctv_timed_write_all(ctx) /* approximation: whole-cache invalidation by remote writes */";
        return "ctv_timed_flush_all(ctx) /* approximation: whole-cache invalidation as per-line flushes */";
    }
    return fmt::format("ctv_timed(ctx, {}, {})", c_kind(op), c_addr(s));
}

}  // namespace

std::string_view schedule_token(Schedule s) {
    switch (s) {
        case Schedule::SameCoreTimeSliced: return "TS";
        case Schedule::SameCoreHyperThreaded: return "HT";
        case Schedule::DifferentCores: return "DC";
        case Schedule::VictimOnly: return "VO";
    }
    return "?";
}

std::optional<Schedule> schedule_from_token(std::string_view token) {
    for (auto s : kSchedules)
        if (schedule_token(s) == token) return s;
    return std::nullopt;
}

bool BenchmarkCase::has_tag(std::string_view tag) const {
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

std::array<Core, 3> BenchmarkCase::cores() const {
    return {step_core(0, ops.ops[0]), step_core(1, ops.ops[1]), step_core(2, ops.ops[2])};
}

const BenchmarkCase* Manifest::find(std::string_view case_id) const {
    for (const auto& c : cases)
        if (c.case_id == case_id) return &c;
    return nullptr;
}

std::vector<OperationVariant> case_variants(const Pattern& p) {
    std::vector<OperationVariant> out;
    for (auto o1 : case_choices(p[0]))
        for (auto o2 : case_choices(p[1]))
            for (auto o3 : case_choices(p[2])) out.push_back(OperationVariant{{o1, o2, o3}});
    return out;
}

Core step_core(std::size_t step, StepOp op) {
    if (step == 2) return op == StepOp::Flush ? Core::Remote : Core::Local;
    return op == StepOp::RemoteWrite ? Core::Remote : Core::Local;
}

std::vector<Schedule> schedules_for(const Pattern& p, const OperationVariant& v) {
    std::set<Core> attacker, victim;
    for (std::size_t i = 0; i < 3; ++i) {
        auto a = actor_of(p[i]);
        if (!a) continue;
        (*a == Actor::Attacker ? attacker : victim).insert(step_core(i, v.ops[i]));
    }
    if (attacker.empty()) return {Schedule::VictimOnly};
    for (auto c : attacker)
        if (victim.count(c)) return {Schedule::SameCoreTimeSliced, Schedule::SameCoreHyperThreaded};
    return {Schedule::DifferentCores};
}

bool known_approximation(const Pattern& p) {
    auto approx = [](State s) { return s == State::A_inv || s == State::V_inv || s == State::Star; };
    return approx(p[1]) || approx(p[2]);
}

std::string case_id_for(int vuln_number, const Pattern& p, const OperationVariant& v, Schedule s) {
    if (vuln_number > 0) return fmt::format("v{:02}.{}.{}", vuln_number, v.token(), schedule_token(s));
    return fmt::format("p{:04}.{}.{}", pattern_index(p), v.token(), schedule_token(s));
}

Manifest expand_cases(const std::vector<VulnerabilityRecord>& catalog, const ManifestParams& params) {
    const auto& golden = golden_catalog();
    bool same = catalog.size() == golden.size();
    for (std::size_t i = 0; same && i < catalog.size(); ++i)
        same = catalog[i].number == golden[i].number && catalog[i].pattern == golden[i].pattern &&
               catalog[i].category == golden[i].category;
    if (!same) throw CatalogMismatch("catalog differs from the golden Strong catalog; refusing to count cases");
    Manifest m{params, {}};
    for (const auto& r : catalog) expand_pattern(m.cases, r.number, r.pattern);
    return m;
}

Manifest emit_validation_suite(const ManifestParams& params) {
    std::map<Pattern, int> numbers;
    for (const auto& r : golden_catalog()) numbers.emplace(r.pattern, r.number);
    Manifest m{params, {}};
    for (const auto& p : enumerate_patterns()) {
        auto it = numbers.find(p);
        expand_pattern(m.cases, it == numbers.end() ? 0 : it->second, p);
    }
    return m;
}

std::string manifest_text(const Manifest& m) {
    std::string out = "# ctv-manifest v1\n";
    out += fmt::format("# run_num={}\n# blocks={}\n# alpha={}\n", m.params.run_num, m.params.blocks, m.params.alpha);
    out += fmt::format("# rules: {}\n", kRules);
    out += "# case_id, vuln, pattern, ops, schedule, tags\n";
    for (const auto& c : m.cases) {
        std::string tags;
        for (const auto& t : c.tags) tags += (tags.empty() ? "" : "|") + t;
        out += fmt::format("{}, {}, {}, {}, {}, {}\n", c.case_id, c.vuln_number, format_pattern(c.pattern),
                           c.ops.token(), schedule_token(c.schedule), tags.empty() ? "-" : tags);
    }
    return out;
}

Manifest parse_manifest(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty()) continue;
        if (view[0] == '#') {
            auto body = trim(view.substr(1));
            auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            auto key = body.substr(0, eq);
            auto value = std::string(body.substr(eq + 1));
            if (key == "run_num") m.params.run_num = std::stoi(value);
            else if (key == "blocks") m.params.blocks = std::stoi(value);
            else if (key == "alpha") m.params.alpha = std::stod(value);
            continue;
        }
        auto fields = split(view, ',');
        if (fields.size() != 6) throw std::runtime_error(fmt::format("manifest line {}: expected 6 fields", line_no));
        BenchmarkCase c;
        c.case_id = std::string(trim(fields[0]));
        c.vuln_number = std::stoi(std::string(trim(fields[1])));
        c.pattern = parse_pattern(trim(fields[2]));
        auto ops = split(trim(fields[3]), '-');
        if (ops.size() != 3) throw std::runtime_error(fmt::format("manifest line {}: bad ops", line_no));
        for (std::size_t i = 0; i < 3; ++i) {
            auto op = step_op_from_token(ops[i]);
            if (!op) throw std::runtime_error(fmt::format("manifest line {}: bad op '{}'", line_no, ops[i]));
            c.ops.ops[i] = *op;
        }
        auto s = schedule_from_token(trim(fields[4]));
        if (!s) throw std::runtime_error(fmt::format("manifest line {}: bad schedule", line_no));
        c.schedule = *s;
        auto tags = trim(fields[5]);
        if (tags != "-")
            for (auto t : split(tags, '|')) c.tags.emplace_back(trim(t));
        m.cases.push_back(std::move(c));
    }
    return m;
}

std::string emit_benchmark_source(const BenchmarkCase& c, const ManifestParams& params) {
    const auto cores = c.cores();
    std::vector<Process> procs;
    std::array<int, 3> owner{};
    for (std::size_t i = 0; i < 3; ++i) {
        auto a = actor_of(c.pattern[i]);
        if (!a) continue;
        auto it = std::find_if(procs.begin(), procs.end(),
                               [&](const Process& p) { return p.actor == *a && p.core == cores[i]; });
        if (it == procs.end()) it = procs.insert(procs.end(), Process{*a, cores[i]});
        owner[i] = static_cast<int>(it - procs.begin());
    }
    if (procs.empty()) procs.push_back(Process{Actor::Victim, Core::Local});
    // Unknown-state steps run in the first process.
    for (std::size_t i = 0; i < 3; ++i)
        if (!actor_of(c.pattern[i])) owner[i] = 0;

    for (auto& p : procs) {
        p.slot = p.core == Core::Local ? 0 : 2;
        bool shared = std::any_of(procs.begin(), procs.end(),
                                  [&](const Process& q) { return q.core == p.core && q.actor != p.actor; });
        if (c.schedule == Schedule::SameCoreHyperThreaded && shared && p.actor == Actor::Victim) p.slot += 1;
    }

    static constexpr std::array<const char*, 4> slot_names{"CTV_SLOT_LOCAL", "CTV_SLOT_LOCAL_SIBLING",
                                                           "CTV_SLOT_REMOTE", "CTV_SLOT_REMOTE_SIBLING"};
    std::string out;
    out += fmt::format("/* case {}: {} ops {} schedule {} */\n", c.case_id, format_pattern(c.pattern), c.ops.token(),
                       schedule_token(c.schedule));
    if (c.vuln_number > 0) out += fmt::format("/* strong catalog #{} */\n", c.vuln_number);
    out += "#include \"ctv_harness.h\"\n\n";
    out += fmt::format("#define CASE_ID \"{}\"\n#define BLOCKS {}\n#define U_LAST {}\n\n", c.case_id, params.blocks,
                       c.u_last_step() ? 1 : 0);

    for (std::size_t i = 0; i < 3; ++i) {
        out += fmt::format("/* step {}: {} op {} on {} core */\n", i + 1, token_of(c.pattern[i]),
                           step_op_token(c.ops.ops[i]), cores[i] == Core::Local ? "local" : "remote");
    }
    out += "\n";

    for (std::size_t k = 0; k < procs.size(); ++k) {
        const auto& p = procs[k];
        out += fmt::format("static void proc{}(ctv_ctx *ctx)\n{{\n", k);
        out += fmt::format("    /* {} on the {} core */\n", p.actor == Actor::Victim ? "victim" : "attacker",
                           p.core == Core::Local ? "local" : "remote");
        out += fmt::format("    ctv_pin(ctx, {});\n", slot_names[static_cast<std::size_t>(p.slot)]);
        out += "    for (int trial = 0; trial < ctv_run_num(ctx); ++trial) {\n";
        out += "        for (int cand = 0; cand < CTV_CANDIDATES; ++cand) {\n";
        out += "            long token = ((long)trial * CTV_CANDIDATES + cand) * 3;\n";
        for (std::size_t i = 0; i < 3; ++i) {
            if (owner[i] != static_cast<int>(k)) continue;
            out += fmt::format("            ctv_step_wait(ctx, token + {});\n", i);
            if (i < 2) {
                out += fmt::format("            {}\n", step_statement(c.pattern[i], c.ops.ops[i]));
            } else {
                auto timed = timed_expression(c.pattern[2], c.ops.ops[2]);
                out += fmt::format("            uint64_t t_first = {};\n", timed);
                out += "            int64_t t_second = -1;\n";
                out += "            if (U_LAST)\n";
                out += fmt::format("                t_second = (int64_t){};\n", timed);
            }
            out += fmt::format("            ctv_step_signal(ctx, token + {});\n", i);
            if (i == 2) {
                out += "            if (cand != CTV_CAND_DUMMY)\n";
                out += "                ctv_write_sample(ctx, cand, trial, 0, t_first, t_second);\n";
            }
        }
        out += "        }\n    }\n}\n\n";
    }

    out += "int main(int argc, char **argv)\n{\n";
    out += "    ctv_ctx *ctx = ctv_init(argc, argv, CASE_ID, BLOCKS, 3);\n";
    out += "    ctv_prime(ctx);\n";
    for (std::size_t k = 1; k < procs.size(); ++k) out += fmt::format("    ctv_spawn(ctx, proc{});\n", k);
    out += "    proc0(ctx);\n";
    out += "    return ctv_finish(ctx);\n}\n";
    return out;
}

}  // namespace ctv

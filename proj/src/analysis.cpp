#include "ctv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fmt/format.h>
#include <set>
#include <sstream>

namespace ctv {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    for (;;) {
        auto pos = s.find(',');
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

double to_double(std::string_view s) {
    std::size_t used = 0;
    std::string str(s);
    double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing characters in number");
    return v;
}

int to_int(std::string_view s) {
    std::size_t used = 0;
    std::string str(s);
    int v = std::stoi(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing characters in integer");
    return v;
}

constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {1, 2}, {0, 2}}};

struct Decision {
    std::optional<Candidate> candidate;
    std::array<double, 3> p{1, 1, 1};
    bool tie_break = false;
};

Decision decide(const std::array<std::vector<double>, 3>& groups, double alpha) {
    Decision d;
    std::array<double, 3> abs_t{};
    std::array<bool, 3> fires{};
    for (std::size_t k = 0; k < 3; ++k) {
        auto [i, j] = kPairs[k];
        auto r = welch_t(groups[i], groups[j]);
        d.p[k] = r.p;
        abs_t[k] = std::fabs(r.t);
        fires[k] = r.p < alpha;
    }
    // Pair indices touching each candidate.
    constexpr std::array<std::array<int, 2>, 3> touching{{{0, 2}, {0, 1}, {1, 2}}};
    std::vector<int> qualified;
    for (int c = 0; c < 3; ++c)
        if (fires[touching[c][0]] && fires[touching[c][1]]) qualified.push_back(c);
    if (qualified.size() == 1) {
        d.candidate = kCandidates[qualified[0]];
    } else if (qualified.size() == 3) {
        d.tie_break = true;
        std::array<double, 3> score{};
        for (int c = 0; c < 3; ++c) score[c] = std::min(abs_t[touching[c][0]], abs_t[touching[c][1]]);
        auto best = std::max_element(score.begin(), score.end()) - score.begin();
        if (std::count(score.begin(), score.end(), score[best]) == 1) d.candidate = kCandidates[best];
    }
    return d;
}

std::string ratio_text(const Ratio& r) { return fmt::format("{}/{}", r.found, r.total); }

}  // namespace

std::string format_sample(const Sample& s) {
    return fmt::format("{}, {}, {}, {}, {}, {}", s.case_id, candidate_name(s.candidate), s.trial, s.block, s.t_first,
                       s.t_second);
}

Sample parse_sample_line(std::string_view line) {
    auto f = split_commas(line);
    if (f.size() != 6) throw std::runtime_error("expected 6 comma-separated fields");
    auto cand = candidate_from_name(f[1]);
    if (!cand) throw std::runtime_error("unknown candidate '" + std::string(f[1]) + "'");
    Sample s;
    s.case_id = std::string(f[0]);
    s.candidate = *cand;
    s.trial = to_int(f[2]);
    s.block = to_int(f[3]);
    s.t_first = to_double(f[4]);
    s.t_second = to_double(f[5]);
    if (s.trial < 0 || s.block < 0) throw std::runtime_error("negative trial or block index");
    return s;
}

std::vector<Sample> parse_samples(const std::string& text) {
    std::vector<Sample> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty() || view[0] == '#') continue;
        try {
            out.push_back(parse_sample_line(view));
        } catch (const std::exception& e) {
            throw std::runtime_error(fmt::format("sample line {}: {}", line_no, e.what()));
        }
    }
    return out;
}

bool SampleSet::complete() const {
    return std::all_of(first.begin(), first.end(),
                       [&](const auto& g) { return static_cast<int>(g.size()) >= run_num && g.size() >= 2; });
}

std::map<std::string, SampleSet> group_samples(const std::vector<Sample>& samples, int run_num) {
    struct Acc {
        double first = 0, second = 0;
        bool has_second = true;
    };
    std::map<std::string, std::array<std::map<int, Acc>, 3>> acc;
    for (const auto& s : samples) {
        auto& a = acc[s.case_id][static_cast<std::size_t>(s.candidate)][s.trial];
        a.first += s.t_first;
        if (s.t_second < 0) a.has_second = false;
        else a.second += s.t_second;
    }
    std::map<std::string, SampleSet> out;
    for (auto& [id, per_cand] : acc) {
        SampleSet set;
        set.case_id = id;
        set.run_num = run_num;
        bool all_second = true;
        for (const auto& trials : per_cand)
            for (const auto& [t, a] : trials) all_second = all_second && a.has_second;
        for (std::size_t c = 0; c < 3; ++c)
            for (const auto& [t, a] : per_cand[c]) {
                set.first[c].push_back(a.first);
                if (all_second) set.second[c].push_back(a.second);
            }
        out.emplace(id, std::move(set));
    }
    return out;
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Found: return "Found";
        case Verdict::FoundScreened: return "Found-Screened";
        case Verdict::NotFound: return "NotFound";
        case Verdict::Incomplete: return "Incomplete";
        case Verdict::Skipped: return "Skipped";
    }
    return "?";
}

std::optional<Verdict> verdict_from_name(std::string_view name) {
    for (auto v : {Verdict::Found, Verdict::FoundScreened, Verdict::NotFound, Verdict::Incomplete, Verdict::Skipped})
        if (verdict_name(v) == name) return v;
    return std::nullopt;
}

CaseVerdict judge_case(const SampleSet& s, bool u_last_step, double alpha) {
    CaseVerdict v;
    v.case_id = s.case_id;
    if (!s.complete()) {
        v.verdict = Verdict::Incomplete;
        v.note = "fewer trials than RUN_NUM";
        return v;
    }
    auto first = decide(s.first, alpha);
    v.p = first.p;
    v.tie_break = first.tie_break;
    if (!first.candidate) {
        v.verdict = Verdict::NotFound;
        return v;
    }
    bool has_second = std::all_of(s.second.begin(), s.second.end(),
                                  [&](const auto& g) { return g.size() == s.first[0].size() && g.size() >= 2; });
    if (u_last_step && has_second) {
        std::array<std::vector<double>, 3> diff;
        for (std::size_t c = 0; c < 3; ++c) {
            if (s.second[c].size() != s.first[c].size()) {
                v.verdict = Verdict::NotFound;
                v.note = "second timings do not pair with first timings";
                return v;
            }
            for (std::size_t i = 0; i < s.first[c].size(); ++i) diff[c].push_back(s.first[c][i] - s.second[c][i]);
        }
        auto confirm = decide(diff, alpha);
        if (confirm.candidate != first.candidate) {
            v.verdict = Verdict::NotFound;
            v.note = "first-minus-second differences disagree";
            return v;
        }
    }
    v.verdict = Verdict::Found;
    v.candidate = first.candidate;
    if (v.tie_break) v.note = "all three candidates differ; largest minimum |t| chosen";
    return v;
}

std::vector<CaseVerdict> false_positive_screen(std::vector<CaseVerdict> verdicts, const Manifest& manifest) {
    std::map<std::string_view, const BenchmarkCase*> by_id;
    for (const auto& c : manifest.cases) by_id.emplace(c.case_id, &c);
    for (auto& v : verdicts) {
        if (v.verdict != Verdict::Found) continue;
        auto it = by_id.find(v.case_id);
        if (it == by_id.end() || !it->second->has_tag(kTagApprox)) continue;
        v.verdict = Verdict::FoundScreened;
        v.note = "step 2 or 3 is approximated (whole-cache invalidation or unknown state); treated as false positive";
    }
    return verdicts;
}

std::string verdicts_csv(const std::vector<CaseVerdict>& verdicts) {
    std::string out = "case_id, verdict, candidate, p_a_alias, p_alias_nib, p_a_nib, tie_break, note\n";
    for (const auto& v : verdicts)
        out += fmt::format("{}, {}, {}, {:.6g}, {:.6g}, {:.6g}, {}, {}\n", v.case_id, verdict_name(v.verdict),
                           v.candidate ? candidate_name(*v.candidate) : "-", v.p[0], v.p[1], v.p[2],
                           v.tie_break ? 1 : 0, v.note);
    return out;
}

std::vector<CaseVerdict> parse_verdicts_csv(const std::string& text) {
    std::vector<CaseVerdict> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty() || view[0] == '#' || view.rfind("case_id", 0) == 0) continue;
        auto f = split_commas(view);
        if (f.size() < 7) throw std::runtime_error(fmt::format("verdict line {}: expected at least 7 fields", line_no));
        CaseVerdict v;
        v.case_id = std::string(f[0]);
        auto verdict = verdict_from_name(f[1]);
        if (!verdict) throw std::runtime_error(fmt::format("verdict line {}: unknown verdict", line_no));
        v.verdict = *verdict;
        if (f[2] != "-") v.candidate = candidate_from_name(f[2]);
        for (std::size_t k = 0; k < 3; ++k) v.p[k] = to_double(f[3 + k]);
        v.tie_break = f[6] == "1";
        for (std::size_t k = 7; k < f.size(); ++k) v.note += (k > 7 ? ", " : "") + std::string(f[k]);
        out.push_back(std::move(v));
    }
    return out;
}

std::string CtvsReport::text() const {
    std::string out = fmt::format("CTVS {}/{}\n", score, types);
    for (const auto* label : {"I-A", "I-S", "I-SA", "E-A", "E-S", "E-SA"}) {
        auto it = categories.find(label);
        out += fmt::format("{:<5} {}\n", label, it == categories.end() ? "0/0" : ratio_text(it->second));
    }
    out += "final step:";
    for (const auto* op : {"R", "W", "RW", "F"})
        if (auto it = by_final_op.find(op); it != by_final_op.end()) out += fmt::format(" {} {}", op, ratio_text(it->second));
    out += "\nschedule:";
    for (const auto* s : {"TS", "HT", "DC", "VO"})
        if (auto it = by_schedule.find(s); it != by_schedule.end()) out += fmt::format(" {} {}", s, ratio_text(it->second));
    out += "\n";
    return out;
}

std::string CtvsReport::csv() const {
    std::string out = "group, key, found, total\n";
    out += fmt::format("score, CTVS, {}, {}\n", score, types);
    for (const auto& [k, r] : categories) out += fmt::format("category, {}, {}, {}\n", k, r.found, r.total);
    for (const auto& [k, r] : by_final_op) out += fmt::format("final_op, {}, {}, {}\n", k, r.found, r.total);
    for (const auto& [k, r] : by_schedule) out += fmt::format("schedule, {}, {}, {}\n", k, r.found, r.total);
    for (const auto& [k, r] : per_type) out += fmt::format("type, {}, {}, {}\n", k, r.found, r.total);
    return out;
}

CtvsReport ctvs(const std::vector<CaseVerdict>& verdicts, const Manifest& manifest,
                const std::vector<VulnerabilityRecord>& catalog) {
    std::map<std::string_view, Verdict> by_id;
    for (const auto& v : verdicts) by_id[v.case_id] = v.verdict;
    CtvsReport r;
    r.types = static_cast<int>(catalog.size());
    std::map<int, std::string> category_of;
    for (const auto& rec : catalog) {
        category_of[rec.number] = rec.category.label();
        r.per_type[rec.number];
    }
    for (const auto& label : {"I-A", "I-S", "I-SA", "E-A", "E-S", "E-SA"}) r.categories[label];
    for (const auto& rec : catalog) ++r.categories[rec.category.label()].total;

    for (const auto& c : manifest.cases) {
        if (!category_of.count(c.vuln_number)) continue;
        auto it = by_id.find(c.case_id);
        bool found = it != by_id.end() && it->second == Verdict::Found;
        auto bump = [&](Ratio& x) {
            ++x.total;
            x.found += found ? 1 : 0;
        };
        bump(r.per_type[c.vuln_number]);
        bump(r.by_final_op[std::string(step_op_token(c.ops.ops[2]))]);
        bump(r.by_schedule[std::string(schedule_token(c.schedule))]);
    }
    for (const auto& [number, ratio] : r.per_type)
        if (ratio.found > 0) {
            ++r.score;
            ++r.categories[category_of[number]].found;
        }
    return r;
}

std::vector<CalibrationProbe> calibration_plan() {
    struct Node {
        SetState state;
        std::vector<CalibrationStep> path;
    };
    std::array<std::optional<std::vector<CalibrationStep>>, 23> best;
    std::set<std::uint32_t> seen{SetState{}.packed()};
    std::deque<Node> queue{Node{SetState{}, {}}};
    while (!queue.empty()) {
        auto node = std::move(queue.front());
        queue.pop_front();
        int m = movement_type(node.state, LineAddr::A, Core::Local);
        if (!best[m]) best[m] = node.path;
        for (auto core : {Core::Local, Core::Remote})
            for (auto addr : kLineAddrs)
                for (auto op : {MemOp::Read, MemOp::Write, MemOp::FlushLine}) {
                    auto next = apply_op(node.state, op, addr, core);
                    if (!seen.insert(next.packed()).second) continue;
                    auto path = node.path;
                    path.push_back(CalibrationStep{op, addr, core});
                    queue.push_back(Node{next, std::move(path)});
                }
    }
    std::vector<CalibrationProbe> plan;
    for (auto op : {ObsOp::Read, ObsOp::Write, ObsOp::Flush})
        for (int m = 1; m <= 22; ++m) {
            if (!best[m]) throw std::logic_error(fmt::format("movement type {} unreachable", m));
            plan.push_back(CalibrationProbe{TimingClass::of(op, m), *best[m], op});
        }
    return plan;
}

std::string calibration_plan_text(const std::vector<CalibrationProbe>& plan) {
    static constexpr std::array<const char*, 3> names{"a", "alias", "d"};
    static constexpr std::array<const char*, 3> finals{"R", "W", "F"};
    static constexpr std::array<const char*, 4> ops{"R", "W", "F", "FA"};
    std::string out = "# class_id, preparation (core.op:line), timed op on line a from the local core\n";
    for (const auto& p : plan) {
        std::string prep;
        for (const auto& s : p.prep)
            prep += fmt::format("{}{}.{}:{}", prep.empty() ? "" : " ", s.core == Core::Local ? "L" : "R",
                                ops[static_cast<int>(s.op)], names[static_cast<int>(s.addr)]);
        out += fmt::format("{}, {}, {}\n", p.timing.id(), prep.empty() ? "-" : prep,
                           finals[static_cast<int>(p.final_op)]);
    }
    return out;
}

std::map<int, std::vector<double>> parse_calibration_samples(const std::string& text) {
    std::map<int, std::vector<double>> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty() || view[0] == '#') continue;
        auto f = split_commas(view);
        if (f.size() != 3) throw std::runtime_error(fmt::format("calibration line {}: expected 3 fields", line_no));
        int id = to_int(f[0]);
        if (id < 1 || id > kTimingClassCount)
            throw std::runtime_error(fmt::format("calibration line {}: class id out of range", line_no));
        out[id].push_back(to_double(f[2]));
    }
    return out;
}

Calibration calibrate(const std::map<int, std::vector<double>>& samples, double alpha) {
    Calibration cal{{}, DistinguishabilityMatrix::nothing()};
    for (const auto& [id, xs] : samples) {
        if (xs.empty()) continue;
        Histogram h;
        h.timing = TimingClass(id);
        h.count = xs.size();
        h.mean = mean(xs);
        auto sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        auto cut_index = static_cast<std::size_t>(std::ceil(0.995 * static_cast<double>(sorted.size()))) - 1;
        long lo = static_cast<long>(std::floor(sorted.front()));
        long hi = static_cast<long>(std::floor(sorted[std::min(cut_index, sorted.size() - 1)]));
        h.first_bin = lo;
        h.bins.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (double x : sorted) {
            long bin = static_cast<long>(std::floor(x));
            if (bin > hi) ++h.overflow;
            else ++h.bins[static_cast<std::size_t>(bin - lo)];
        }
        cal.histograms.push_back(std::move(h));
    }
    for (auto i = samples.begin(); i != samples.end(); ++i)
        for (auto j = std::next(i); j != samples.end(); ++j) {
            if (i->second.size() < 2 || j->second.size() < 2) continue;
            if (welch_t(i->second, j->second).p < alpha)
                cal.matrix.set(TimingClass(i->first), TimingClass(j->first), true);
        }
    return cal;
}

std::string histograms_csv(const std::vector<Histogram>& histograms) {
    std::string out = "class_id, bin_low, count\n";
    for (const auto& h : histograms) {
        for (std::size_t b = 0; b < h.bins.size(); ++b)
            if (h.bins[b]) out += fmt::format("{}, {}, {}\n", h.timing.id(), h.first_bin + static_cast<long>(b), h.bins[b]);
        if (h.overflow)
            out += fmt::format("{}, {}, {}\n", h.timing.id(), h.first_bin + static_cast<long>(h.bins.size()), h.overflow);
    }
    return out;
}

}  // namespace ctv

#include "ctv/cache_sim.hpp"

#include <deque>
#include <sstream>

namespace ctv {
namespace {

constexpr std::array<Level, 3> kLevels{Level::L1, Level::L2, Level::L3};

Core other(Core c) { return c == Core::Local ? Core::Remote : Core::Local; }

SetState remove_line(SetState s, Core c, LineAddr addr) {
    for (auto l : kLevels) {
        auto slot = s.slot(c, l);
        if (slot.occupant == addr) s.set_slot(c, l, Slot{});
    }
    return s;
}

SetState insert_l1(SetState s, Core c, LineAddr addr, bool dirty) {
    Slot carry{addr, dirty};
    for (auto l : kLevels) {
        auto displaced = s.slot(c, l);
        s.set_slot(c, l, carry);
        if (!displaced.occupant) break;
        carry = displaced;
    }
    return s;
}

std::pair<MemOp, Core> mem_op_for(StepOp op) {
    switch (op) {
        case StepOp::Read: return {MemOp::Read, Core::Local};
        case StepOp::Write: return {MemOp::Write, Core::Local};
        case StepOp::Flush: return {MemOp::FlushLine, Core::Local};
        case StepOp::RemoteWrite: return {MemOp::Write, Core::Remote};
        case StepOp::Unknown: break;
    }
    throw std::logic_error("unknown-state step has no memory operation");
}

}  // namespace

Slot SetState::slot(Core c, Level l) const {
    auto code = (packed_ >> (3 * frame(c, l))) & 7U;
    if (code == 0) return {};
    return Slot{static_cast<LineAddr>((code - 1) / 2), ((code - 1) & 1U) != 0};
}

void SetState::set_slot(Core c, Level l, Slot s) {
    std::uint32_t code = s.occupant ? 1 + 2 * static_cast<std::uint32_t>(*s.occupant) + (s.dirty ? 1 : 0) : 0;
    auto shift = 3 * frame(c, l);
    packed_ = (packed_ & ~(7U << shift)) | (code << shift);
}

std::optional<std::pair<Level, bool>> SetState::find(Core c, LineAddr addr) const {
    for (auto l : kLevels) {
        auto s = slot(c, l);
        if (s.occupant == addr) return std::pair{l, s.dirty};
    }
    return std::nullopt;
}

SetState SetState::from_packed(std::uint32_t bits) {
    SetState s;
    s.packed_ = bits;
    return s;
}

bool SetState::coherent() const {
    for (auto c : {Core::Local, Core::Remote}) {
        for (auto a : kLineAddrs) {
            int copies = 0;
            for (auto l : kLevels) copies += slot(c, l).occupant == a ? 1 : 0;
            if (copies > 1) return false;
            auto mine = find(c, a);
            if (mine && mine->second && find(other(c), a)) return false;
        }
        for (auto l : kLevels) {
            auto s = slot(c, l);
            if (!s.occupant && s.dirty) return false;
        }
    }
    return true;
}

std::string SetState::describe() const {
    static constexpr std::array<const char*, 3> names{"a", "alias", "d"};
    std::ostringstream out;
    for (auto c : {Core::Local, Core::Remote}) {
        out << (c == Core::Local ? "local[" : " remote[");
        for (auto l : kLevels) {
            auto s = slot(c, l);
            if (l != Level::L1) out << ' ';
            out << (s.occupant ? names[static_cast<int>(*s.occupant)] : "-") << (s.dirty ? "*" : "");
        }
        out << ']';
    }
    return out.str();
}

SetState apply_op(SetState s, MemOp op, LineAddr addr, Core actor) {
    switch (op) {
        case MemOp::Read: {
            if (auto hit = s.find(actor, addr)) {
                if (hit->first == Level::L1) return s;
                return insert_l1(remove_line(s, actor, addr), actor, addr, hit->second);
            }
            if (auto remote = s.find(other(actor), addr); remote && remote->second)
                s.set_slot(other(actor), remote->first, Slot{addr, false});
            return insert_l1(s, actor, addr, false);
        }
        case MemOp::Write:
            return insert_l1(remove_line(remove_line(s, other(actor), addr), actor, addr), actor, addr, true);
        case MemOp::FlushLine:
            return remove_line(remove_line(s, Core::Local, addr), Core::Remote, addr);
        case MemOp::FlushAll:
            return SetState{};
    }
    return s;
}

int movement_type(const SetState& s, LineAddr addr, Core observer) {
    auto mine = s.find(observer, addr);
    auto theirs = s.find(other(observer), addr);
    if (mine && theirs) return 14 + 3 * static_cast<int>(mine->first) + static_cast<int>(theirs->first);
    if (mine) return 1 + static_cast<int>(mine->first) + (mine->second ? 6 : 0);
    if (theirs) return 4 + static_cast<int>(theirs->first) + (theirs->second ? 6 : 0);
    return 13;
}

TimingClass observe(const SetState& s, ObsOp op, LineAddr addr, Core observer) {
    return TimingClass::of(op, movement_type(s, addr, observer));
}

std::string_view step_op_token(StepOp op) {
    switch (op) {
        case StepOp::Read: return "R";
        case StepOp::Write: return "W";
        case StepOp::Flush: return "F";
        case StepOp::RemoteWrite: return "RW";
        case StepOp::Unknown: return "X";
    }
    return "?";
}

std::optional<StepOp> step_op_from_token(std::string_view token) {
    for (auto op : {StepOp::Read, StepOp::Write, StepOp::Flush, StepOp::RemoteWrite, StepOp::Unknown})
        if (step_op_token(op) == token) return op;
    return std::nullopt;
}

int StateSpace::action(MemOp op, LineAddr addr, Core actor) {
    int base = static_cast<int>(addr) * 5;
    switch (op) {
        case MemOp::Read: return base + static_cast<int>(actor);
        case MemOp::Write: return base + 2 + static_cast<int>(actor);
        case MemOp::FlushLine: return base + 4;
        case MemOp::FlushAll: break;
    }
    throw std::logic_error("whole-cache flush is not a per-line action");
}

StateSpace::StateSpace() {
    states_.push_back(SetState{});
    index_.emplace(0, 0);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        std::array<std::uint32_t, kActions> row{};
        for (auto a : kLineAddrs) {
            for (auto op : {MemOp::Read, MemOp::Write, MemOp::FlushLine}) {
                for (auto c : {Core::Local, Core::Remote}) {
                    if (op == MemOp::FlushLine && c == Core::Remote) continue;
                    auto succ = apply_op(states_[i], op, a, c);
                    auto [it, fresh] = index_.emplace(succ.packed(), states_.size());
                    if (fresh) states_.push_back(succ);
                    row[action(op, a, c)] = static_cast<std::uint32_t>(it->second);
                }
            }
        }
        next_.push_back(row);
    }
}

const StateSpace& StateSpace::instance() {
    static const StateSpace space;
    return space;
}

std::optional<std::size_t> StateSpace::index(const SetState& s) const {
    auto it = index_.find(s.packed());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t StateSpace::next(std::size_t i, MemOp op, LineAddr addr, Core actor) const {
    if (op == MemOp::FlushAll) return empty_index();
    if (op == MemOp::FlushLine) actor = Core::Local;
    return next_[i][action(op, addr, actor)];
}

StateSet StateSet::empty_world() {
    StateSet s;
    s.insert(StateSpace::instance().empty_index());
    return s;
}

StateSet StateSet::unknown() {
    StateSet s;
    for (std::size_t i = 0; i < StateSpace::instance().size(); ++i) s.insert(i);
    return s;
}

StateSet StateSet::of(std::initializer_list<SetState> states) {
    StateSet s;
    for (const auto& st : states) {
        auto i = StateSpace::instance().index(st);
        if (!i) throw std::invalid_argument("state not reachable: " + st.describe());
        s.insert(*i);
    }
    return s;
}

std::size_t StateSet::count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
}

std::size_t StateSet::hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (auto w : bits_) h = (h ^ w) * 1099511628211ULL;
    return h;
}

World initial_world() { return World{StateSet::unknown(), StateSet::unknown()}; }

World representative_world() {
    SetState a_clean, a_dirty, d_clean;
    a_clean.set_slot(Core::Local, Level::L1, Slot{LineAddr::A, false});
    a_dirty.set_slot(Core::Local, Level::L1, Slot{LineAddr::A, true});
    d_clean.set_slot(Core::Local, Level::L1, Slot{LineAddr::D, false});
    auto reps = StateSet::of({SetState{}, a_clean, a_dirty, d_clean});
    return World{reps, reps};
}

Simulator::SetId Simulator::intern(const StateSet& s) {
    auto h = s.hash();
    auto [lo, hi] = by_hash_.equal_range(h);
    for (auto it = lo; it != hi; ++it)
        if (sets_[it->second] == s) return it->second;
    auto id = static_cast<SetId>(sets_.size());
    sets_.push_back(s);
    by_hash_.emplace(h, id);
    return id;
}

Simulator::SetId Simulator::step(SetId s, MemOp op, LineAddr addr, Core actor) {
    Key key{s, static_cast<std::uint8_t>(static_cast<int>(op) * 16 + static_cast<int>(addr) * 2 +
                                         static_cast<int>(actor))};
    if (auto it = step_memo_.find(key); it != step_memo_.end()) return it->second;
    const auto& space = StateSpace::instance();
    StateSet out;
    sets_[s].for_each([&](std::size_t i) { out.insert(space.next(i, op, addr, actor)); });
    auto id = intern(out);
    step_memo_.emplace(key, id);
    return id;
}

ClassSet Simulator::observe_set(SetId s, ObsOp op, LineAddr addr, Core observer) {
    Key key{s, static_cast<std::uint8_t>(static_cast<int>(op) * 16 + static_cast<int>(addr) * 2 +
                                         static_cast<int>(observer))};
    if (auto it = obs_memo_.find(key); it != obs_memo_.end()) return it->second;
    const auto& space = StateSpace::instance();
    ClassSet out;
    sets_[s].for_each([&](std::size_t i) { out.set(observe(space.state(i), op, addr, observer).id()); });
    obs_memo_.emplace(key, out);
    return out;
}

ClassSet Simulator::run_pattern(const ConcretePattern& p, const std::array<StepOp, 3>& ops) {
    static const World init = initial_world();
    return run_pattern(p, ops, init);
}

ClassSet Simulator::run_pattern(const ConcretePattern& p, const std::array<StepOp, 3>& ops, const World& init) {
    SetId tracked = intern(init.tracked);
    SetId nib = intern(init.nib);
    const SetId unknown = intern(StateSet::unknown());
    const SetId empty = intern(StateSet::empty_world());

    for (std::size_t i = 0; i < 2; ++i) {
        const auto& st = p.steps[i];
        if (ops[i] == StepOp::Unknown || st.target == Target::Unknown) {
            tracked = nib = unknown;
            continue;
        }
        auto [op, core] = mem_op_for(ops[i]);
        switch (st.target) {
            case Target::WholeCache:
                if (ops[i] == StepOp::RemoteWrite) {
                    // Every line of both sets is written, in unknown order.
                    auto write_all = [&](SetId from) {
                        StateSet any;
                        auto order = kLineAddrs;
                        do {
                            SetId s = from;
                            for (auto a : order) s = step(s, MemOp::Write, a, Core::Remote);
                            any |= sets_[s];
                        } while (std::next_permutation(order.begin(), order.end()));
                        return intern(any);
                    };
                    tracked = write_all(tracked);
                    nib = write_all(nib);
                } else {
                    tracked = nib = empty;
                }
                break;
            case Target::NibA: nib = step(nib, op, LineAddr::A, core); break;
            case Target::A: tracked = step(tracked, op, LineAddr::A, core); break;
            case Target::Alias: tracked = step(tracked, op, LineAddr::Alias, core); break;
            case Target::D: tracked = step(tracked, op, LineAddr::D, core); break;
            case Target::Unknown: break;
        }
    }

    const auto& last = p.steps[2];
    ClassSet out;
    if (ops[2] == StepOp::Unknown || last.target == Target::Unknown || last.target == Target::WholeCache) {
        out.set(TimingClass::unobserved().id());
        return out;
    }
    ObsOp obs = ops[2] == StepOp::Read ? ObsOp::Read : ops[2] == StepOp::Flush ? ObsOp::Flush : ObsOp::Write;
    Core observer = ops[2] == StepOp::RemoteWrite ? Core::Remote : Core::Local;
    switch (last.target) {
        case Target::NibA: return observe_set(nib, obs, LineAddr::A, observer);
        case Target::A: return observe_set(tracked, obs, LineAddr::A, observer);
        case Target::Alias: return observe_set(tracked, obs, LineAddr::Alias, observer);
        case Target::D: return observe_set(tracked, obs, LineAddr::D, observer);
        default: break;
    }
    return out;
}

}  // namespace ctv

#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctv/model.hpp"

namespace ctv {

enum class Core : std::uint8_t { Local, Remote };
enum class Level : std::uint8_t { L1, L2, L3 };

// Line names inside one cache set. The NIB set reuses A for its line.
enum class LineAddr : std::uint8_t { A, Alias, D };
inline constexpr std::array<LineAddr, 3> kLineAddrs{LineAddr::A, LineAddr::Alias, LineAddr::D};

enum class MemOp : std::uint8_t { Read, Write, FlushLine, FlushAll };
enum class ObsOp : std::uint8_t { Read = 0, Write = 1, Flush = 2 };

struct Slot {
    std::optional<LineAddr> occupant;
    bool dirty = false;

    auto operator<=>(const Slot&) const = default;
};

// One cache set seen from two cores: frames L1/L2/L3 per core, one line each.
// Displaced lines spill L1 -> L2 -> L3 -> memory and keep their dirty bit.
// Invariants: empty frames are clean; a line appears at most once per core;
// a line dirty on one core is absent from the other.
class SetState {
public:
    SetState() = default;

    Slot slot(Core c, Level l) const;
    void set_slot(Core c, Level l, Slot s);

    // Innermost level holding addr on core c.
    std::optional<std::pair<Level, bool>> find(Core c, LineAddr addr) const;

    bool empty() const { return packed_ == 0; }
    std::uint32_t packed() const { return packed_; }
    static SetState from_packed(std::uint32_t bits);

    bool coherent() const;
    std::string describe() const;

    auto operator<=>(const SetState&) const = default;

private:
    static constexpr int frame(Core c, Level l) { return static_cast<int>(c) * 3 + static_cast<int>(l); }
    std::uint32_t packed_ = 0;  // 3 bits per frame: 0 empty, else 1 + 2*addr + dirty
};

SetState apply_op(SetState s, MemOp op, LineAddr addr, Core actor);

// 1..22 in legend order: local clean L1-L3, remote clean L1-L3, local dirty
// L1-L3, remote dirty L1-L3, DRAM, then clean on both cores (3*local+remote).
int movement_type(const SetState& s, LineAddr addr, Core observer);

class TimingClass {
public:
    constexpr TimingClass() = default;
    constexpr explicit TimingClass(int id) : id_(id) {}
    static constexpr TimingClass of(ObsOp op, int movement) {
        return TimingClass(22 * static_cast<int>(op) + movement);
    }
    // Final steps that time nothing (whole-cache invalidation, unknown state).
    static constexpr TimingClass unobserved() { return TimingClass(0); }

    constexpr int id() const { return id_; }
    constexpr bool observed() const { return id_ != 0; }
    constexpr ObsOp op() const { return static_cast<ObsOp>((id_ - 1) / 22); }
    constexpr int movement() const { return (id_ - 1) % 22 + 1; }

    auto operator<=>(const TimingClass&) const = default;

private:
    int id_ = 0;
};

inline constexpr int kTimingClassCount = 66;

TimingClass observe(const SetState& s, ObsOp op, LineAddr addr, Core observer);

// Per-step operation choice, shared by derivation and case generation.
// On a whole-cache step Flush empties every frame and RemoteWrite stores to
// every tracked line from the remote core, in any order.
enum class StepOp : std::uint8_t { Read, Write, Flush, RemoteWrite, Unknown };

std::string_view step_op_token(StepOp op);  // "R", "W", "F", "RW", "X"
std::optional<StepOp> step_op_from_token(std::string_view token);

using ClassSet = std::bitset<kTimingClassCount + 1>;  // bit 0 = unobserved

// Every set state reachable from the empty set through reads, writes and
// flushes of a, a^alias and d on either core. Closed under apply_op.
class StateSpace {
public:
    static const StateSpace& instance();

    std::size_t size() const { return states_.size(); }
    const SetState& state(std::size_t i) const { return states_[i]; }
    std::optional<std::size_t> index(const SetState& s) const;
    std::size_t empty_index() const { return 0; }
    std::size_t next(std::size_t i, MemOp op, LineAddr addr, Core actor) const;

private:
    StateSpace();
    static constexpr int kActions = 3 * 5;
    static int action(MemOp op, LineAddr addr, Core actor);

    std::vector<SetState> states_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
    std::vector<std::array<std::uint32_t, kActions>> next_;
};

// Dense subset of the StateSpace.
class StateSet {
public:
    StateSet() : bits_((StateSpace::instance().size() + 63) / 64, 0) {}
    static StateSet empty_world();
    static StateSet unknown();  // every reachable state
    static StateSet of(std::initializer_list<SetState> states);

    void insert(std::size_t i) { bits_[i / 64] |= std::uint64_t{1} << (i % 64); }
    StateSet& operator|=(const StateSet& other) {
        for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= other.bits_[w];
        return *this;
    }
    bool contains(std::size_t i) const { return (bits_[i / 64] >> (i % 64)) & 1U; }
    std::size_t count() const;
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < bits_.size(); ++w)
            for (auto b = bits_[w]; b; b &= b - 1) f(w * 64 + static_cast<std::size_t>(__builtin_ctzll(b)));
    }

    bool operator==(const StateSet&) const = default;
    std::size_t hash() const;

private:
    std::vector<std::uint64_t> bits_;
};

// Sets of possible states for the tracked set and the NIB set.
struct World {
    StateSet tracked;
    StateSet nib;

    bool operator==(const World&) const = default;
};

World initial_world();        // prior contents unknown
World representative_world(); // small fixed sample of prior contents

// Memoizing symbolic executor. Not thread-safe; use one per thread.
class Simulator {
public:
    Simulator() = default;

    // Applies steps 1-2, then observes step 3 for every possible state.
    ClassSet run_pattern(const ConcretePattern& p, const std::array<StepOp, 3>& ops);
    ClassSet run_pattern(const ConcretePattern& p, const std::array<StepOp, 3>& ops, const World& init);

private:
    using SetId = std::uint32_t;
    struct Key {
        SetId set;
        std::uint8_t action;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return (std::size_t{k.set} << 8) ^ k.action; }
    };

    SetId intern(const StateSet& s);
    SetId step(SetId s, MemOp op, LineAddr addr, Core actor);
    ClassSet observe_set(SetId s, ObsOp op, LineAddr addr, Core observer);

    std::vector<StateSet> sets_;
    std::unordered_multimap<std::size_t, SetId> by_hash_;
    std::unordered_map<Key, SetId, KeyHash> step_memo_;
    std::unordered_map<Key, ClassSet, KeyHash> obs_memo_;
};

}  // namespace ctv

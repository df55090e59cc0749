#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ctv::cli {

enum class Exit : int {
    Ok = 0,
    Error = 1,
    Usage = 2,
    MissingInput = 3,
    TopologyMismatch = 4,
    CatalogDiff = 5,
    ValidationUncovered = 6,
};

// Hardware threads grouped by physical core. JSON form:
// {"smt": true, "cores": [{"id": 0, "threads": [0, 8]}, ...]}
struct Topology {
    struct CoreThreads {
        int id = 0;
        std::vector<int> threads;
    };
    bool smt = false;
    std::vector<CoreThreads> cores;

    // Throws std::runtime_error naming the first inconsistency.
    void check() const;
    // "L0,L1,R0,R1" for the first two cores; missing threads are -1.
    std::string threads_arg() const;

    std::string to_json() const;
    static Topology from_json(const std::string& text);
    // Linux sysfs view of the host; a starting point for a declared file.
    static Topology detect();
};

// Outcome of one generated program run, from its exit status.
enum class RunStatus { Ok, Usage, SkipSchedule, SkipCapability, SequenceTimeout, Timeout, Failed };
std::string_view run_status_name(RunStatus s);
RunStatus run_status_from_exit(int code);

// Entry point for the ctvs tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctv::cli

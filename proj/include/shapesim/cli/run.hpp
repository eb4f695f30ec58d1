#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shapesim::cli {

enum class Command {
    score,
    matrix,
    triangles,
    block_cluster,
    gmds,
    torgerson,
    kmeans,
    correlate,
    project,
    report,
};

std::string to_string(Command c);

struct RunConfig {
    Command command = Command::matrix;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output_dir = ".";
    std::optional<std::filesystem::path> out;  // overrides the primary artifact path
    std::uint64_t seed = 0;

    // Unset values fall back to the library defaults for the command.
    std::optional<int> starts;
    std::optional<int> max_iters;
    int workers = 1;
    int dim = 2;
    int k = 2;
    std::optional<int> restarts;
    std::optional<int> generations;
    std::optional<int> population;

    std::optional<std::filesystem::path> assignment;  // report: colour the map
    std::optional<std::filesystem::path> anchors;     // report: align the map
    bool scatter = false;                             // report: also D vs d scatter
};

/// Executes one command. Returns 0 on success; on failure prints
/// "error: ..." to `err` and returns 1.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it. Usage errors return 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shapesim::cli

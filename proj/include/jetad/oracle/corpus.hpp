#pragma once

#include <jetad/ad_macro.hpp>
#include <jetad/eval.hpp>
#include <jetad/oracle/compare.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace jetad::oracle {

struct CorpusProgram
{
    std::string name;
    Term term;
    Type type;
    FirstOrderProgram program;
};

/// Parses and flattens one closed program whose type is built from real,
/// products and functions with a real result.
CorpusProgram load_program(const std::string& name, const std::string& source, const Registry* registry = nullptr);

/// Every *.ad file in `dir`, sorted by file name.
std::vector<CorpusProgram> load_corpus(const std::filesystem::path& dir, const Registry* registry = nullptr);

struct SelftestOptions
{
    std::uint64_t seed = 20240607;
    std::size_t points = 5;
    std::vector<MacroConfig> configs{MacroConfig::full(1, 1), MacroConfig::full(1, 2), MacroConfig::full(2, 2)};
    Tolerance fd_tolerance{};
    /// (1,2) macro jets against twice-iterated (1,1) jets.
    Tolerance iterated_tolerance = Tolerance::uniform(1e-9, 1e-12);
    /// Restricted (2,2) against the matching slots of the full (2,2) jet.
    Tolerance restricted_tolerance = Tolerance::uniform(1e-12);
    const Registry* registry = nullptr;
};

struct CaseResult
{
    std::string program;
    /// "fd", "iterated" or "restricted".
    std::string check;
    std::string config;
    std::size_t point_index = 0;
    JetComparison comparison;
};

struct SelftestReport
{
    bool pass = true;
    std::vector<CaseResult> cases;

    std::size_t failures() const;
    nlohmann::json to_json() const;
};

/// Sample points are drawn uniformly from [-2, 2] and directions from
/// [-1, 1] with a generator seeded by options.seed.
SelftestReport run_selftest(const std::vector<CorpusProgram>& corpus, const SelftestOptions& options = {});

} // namespace jetad::oracle

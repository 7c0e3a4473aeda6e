#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wzns/experiments.hpp"

namespace wzns {

struct RunConfig {
    ExperimentConfig experiment;
    std::string out_dir = "wzns_out";
};

// Subcommands accepted by run().
const std::vector<std::string>& subcommands();

// Every settable key as "section.key"; keys are unique without the section.
std::vector<std::string> valid_keys();

// Sets one key from text. section may be empty; otherwise it must be the
// key's own section. Throws unknown_key (listing the valid keys) or
// configuration for malformed values.
void set_key(RunConfig& config, const std::string& section, const std::string& key, const std::string& value);

// INI-style text: [solver], [experiment], [output] sections or bare keys.
void apply_config_text(RunConfig& config, std::istream& is);
void apply_config_file(RunConfig& config, const std::string& path);

// Constraint checks for the given subcommand; throws constraint with a
// message naming the violated rule.
void validate(const RunConfig& config, const std::string& command);

struct RunOutcome {
    ExperimentReport report;
    bool failed_checks = false;  // validate only
};

// Validates, runs the subcommand and, when write_files is set, writes
// report.json, samples/*.csv and (simulate) states/*.bin under out_dir.
RunOutcome run(const RunConfig& config, const std::string& command, bool write_files = true);

// {"error": {"code": ..., "status": ..., "message": ...}}
std::string error_record(int status, const std::string& code_name, const std::string& message);

}  // namespace wzns

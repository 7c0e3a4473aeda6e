// Command-line front end; talks to the library only through wzns.h.
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wzns/wzns.h"

namespace {

int report_error(int status)
{
    char* rec = nullptr;
    if (wzns_last_error_record(&rec) == WZNS_OK) {
        std::cerr << rec << "\n";
        wzns_string_free(rec);
    } else {
        std::cerr << "{\"error\":{\"status\":" << status << "}}\n";
    }
    return status == WZNS_OK ? 1 : status;
}

std::string take(char* s)
{
    std::string out = s ? s : "";
    wzns_string_free(s);
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Wong-Zakai transport-noise Navier-Stokes solver"};
    app.set_version_flag("--version", std::string(wzns_version()));
    app.require_subcommand(1, 1);
    app.fallthrough();  // options may follow the subcommand

    std::string config_path;
    std::vector<std::string> sets;
    bool show_config = false;
    // flag name -> config key; values are handed to the library as text
    const std::vector<std::pair<std::string, std::string>> flags = {
        {"seed", "seed"}, {"out", "out"},     {"samples", "samples"}, {"M", "M"},         {"N", "N"},
        {"n", "n"},       {"nu", "nu"},       {"gamma", "gamma"},     {"delta", "delta"}, {"alpha", "alpha"},
        {"T", "T"},       {"dt", "dt"},       {"K", "K"},             {"R", "R"},         {"mode", "mode"},
        {"initial", "initial"}};
    std::map<std::string, std::string> given;

    app.add_option("--config", config_path, "INI file with [solver], [experiment], [output] sections")
        ->check(CLI::ExistingFile);
    for (const auto& [flag, key] : flags) {
        app.add_option_function<std::string>(
            "--" + flag, [&given, key = key](const std::string& v) { given[key] = v; }, "override " + key);
    }
    app.add_option("--set", sets, "extra override, key=value (repeatable)");
    app.add_flag("--show-config", show_config, "print the resolved configuration before running");

    const char* commands[][2] = {{"simulate", "one trajectory with diagnostics and state snapshots"},
                                 {"wz-convergence", "Wong-Zakai distances to a fine reference"},
                                 {"scaling-limit", "distance to the enhanced-viscosity limit over N"},
                                 {"lifespan", "survival fraction per noise sample"},
                                 {"rough-diagnostics", "rough driver, drift and remainder ratios"},
                                 {"validate", "invariant suite; nonzero exit on any failure"}};
    for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    const std::string command = app.get_subcommands().front()->get_name();

    wzns_config* cfg = nullptr;
    int st = wzns_config_create(&cfg);
    if (st != WZNS_OK) return report_error(st);
    auto finish = [&](int code) {
        wzns_config_destroy(cfg);
        return code;
    };
    if (!config_path.empty() && (st = wzns_config_load_file(cfg, config_path.c_str())) != WZNS_OK) {
        return finish(report_error(st));
    }
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::cerr << "{\"error\":{\"code\":\"configuration\",\"status\":10,\"message\":\"--set expects key=value\"}}\n";
            return finish(WZNS_CONFIGURATION);
        }
        if ((st = wzns_config_set(cfg, s.substr(0, eq).c_str(), s.substr(eq + 1).c_str())) != WZNS_OK) {
            return finish(report_error(st));
        }
    }
    for (const auto& [key, value] : given) {
        if ((st = wzns_config_set(cfg, key.c_str(), value.c_str())) != WZNS_OK) return finish(report_error(st));
    }
    if (show_config) {
        char* text = nullptr;
        if ((st = wzns_config_text(cfg, &text)) != WZNS_OK) return finish(report_error(st));
        std::cout << take(text);
    }
    if ((st = wzns_config_validate(cfg, command.c_str())) != WZNS_OK) return finish(report_error(st));

    wzns_report* rep = nullptr;
    st = wzns_run(cfg, command.c_str(), 1, &rep);
    if (rep != nullptr) {
        char* json = nullptr;
        if (wzns_report_json(rep, &json) == WZNS_OK) {
            // records can be long; print the header fields and summary only
            const std::string j = take(json);
            const auto rec = j.find("\n \"records\"");
            const auto sum = j.find("\n \"summary\"");
            if (rec != std::string::npos && sum != std::string::npos) {
                std::cout << j.substr(0, rec) << j.substr(sum) << "\n";
            } else {
                std::cout << j << "\n";
            }
        }
        wzns_report_destroy(rep);
    }
    if (st != WZNS_OK) return finish(report_error(st));
    return finish(0);
}

#include "wzns/wzns.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "wzns/config.hpp"
#include "wzns/error.hpp"

struct wzns_config {
    wzns::RunConfig config;
};

struct wzns_report {
    wzns::ExperimentReport report;
};

namespace {

thread_local std::string last_message;
thread_local int last_status = WZNS_OK;

int fail(int status, const std::string& message)
{
    last_status = status;
    last_message = message;
    return status;
}

template <class Fn>
int guarded(Fn&& fn)
{
    try {
        const int status = fn();
        if (status == WZNS_OK) {
            last_status = WZNS_OK;
            last_message.clear();
        }
        return status;
    } catch (const wzns::Error& e) {
        return fail(int(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(WZNS_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(WZNS_INTERNAL, e.what());
    } catch (...) {
        return fail(WZNS_INTERNAL, "unknown exception");
    }
}

int give(const std::string& s, char** out)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) return fail(WZNS_INTERNAL, "out of memory");
    std::memcpy(p, s.c_str(), s.size() + 1);
    *out = p;
    return WZNS_OK;
}

#define WZNS_REQUIRE(cond, what) \
    if (!(cond)) return fail(WZNS_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* wzns_version(void) { return wzns::version_string(); }

const char* wzns_status_name(int status) { return wzns::error_code_name(wzns::ErrorCode(status)); }

const char* wzns_last_error(void) { return last_message.c_str(); }

int wzns_last_error_record(char** out)
{
    if (out == nullptr) return WZNS_INVALID_ARGUMENT;
    try {
        return give(wzns::error_record(last_status, wzns_status_name(last_status), last_message), out);
    } catch (...) {
        return WZNS_INTERNAL;
    }
}

void wzns_string_free(char* s) { std::free(s); }

int wzns_config_create(wzns_config** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(out, "out is null");
        *out = new wzns_config{};
        return WZNS_OK;
    });
}

void wzns_config_destroy(wzns_config* config) { delete config; }

int wzns_config_load_file(wzns_config* config, const char* path)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && path, "null argument");
        wzns::apply_config_file(config->config, path);
        return WZNS_OK;
    });
}

int wzns_config_load_text(wzns_config* config, const char* text)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && text, "null argument");
        std::istringstream is(text);
        wzns::apply_config_text(config->config, is);
        return WZNS_OK;
    });
}

int wzns_config_set(wzns_config* config, const char* key, const char* value)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && key && value, "null argument");
        const std::string k(key);
        const auto dot = k.find('.');
        if (dot == std::string::npos) {
            wzns::set_key(config->config, "", k, value);
        } else {
            wzns::set_key(config->config, k.substr(0, dot), k.substr(dot + 1), value);
        }
        return WZNS_OK;
    });
}

int wzns_config_text(const wzns_config* config, char** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && out, "null argument");
        return give(wzns::canonical_config(config->config.experiment) + "out=" + config->config.out_dir + "\n", out);
    });
}

int wzns_config_hash(const wzns_config* config, uint64_t* out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && out, "null argument");
        *out = wzns::config_hash(config->config.experiment);
        return WZNS_OK;
    });
}

int wzns_config_validate(const wzns_config* config, const char* command)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && command, "null argument");
        wzns::validate(config->config, command);
        return WZNS_OK;
    });
}

int wzns_valid_keys(char** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(out, "out is null");
        std::string s;
        for (const auto& k : wzns::valid_keys()) s += k + "\n";
        return give(s, out);
    });
}

int wzns_run(const wzns_config* config, const char* command, int write_files, wzns_report** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(config && command && out, "null argument");
        *out = nullptr;
        wzns::RunOutcome r = wzns::run(config->config, command, write_files != 0);
        *out = new wzns_report{std::move(r.report)};
        if (r.failed_checks) return fail(WZNS_VALIDATION_FAILED, "one or more invariant checks failed");
        return WZNS_OK;
    });
}

void wzns_report_destroy(wzns_report* report) { delete report; }

int wzns_report_json(const wzns_report* report, char** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(report && out, "null argument");
        return give(report->report.to_json().dump(1), out);
    });
}

int wzns_report_records_csv(const wzns_report* report, char** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(report && out, "null argument");
        return give(report->report.records_csv(), out);
    });
}

int wzns_report_shape(const wzns_report* report, size_t* records, size_t* columns)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(report && records && columns, "null argument");
        *records = report->report.records.size();
        *columns = report->report.columns.size();
        return WZNS_OK;
    });
}

int wzns_report_column_name(const wzns_report* report, size_t column, char** out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(report && out, "null argument");
        WZNS_REQUIRE(column < report->report.columns.size(), "column out of range");
        return give(report->report.columns[column], out);
    });
}

int wzns_report_value(const wzns_report* report, size_t record, size_t column, double* out)
{
    return guarded([&]() -> int {
        WZNS_REQUIRE(report && out, "null argument");
        WZNS_REQUIRE(record < report->report.records.size(), "record out of range");
        const auto& values = report->report.records[record].values;
        WZNS_REQUIRE(column < values.size(), "column out of range");
        *out = values[column];
        return WZNS_OK;
    });
}

}  // extern "C"

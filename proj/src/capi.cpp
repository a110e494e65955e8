#include "kerrpol.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/fig1.hpp"
#include "core/selftest.hpp"
#include "core/sweep.hpp"
#include "core/table.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

kp_status status_of(kerrpol::ErrorCode code) {
  using kerrpol::ErrorCode;
  switch (code) {
    case ErrorCode::parse: return KP_ERR_PARSE;
    case ErrorCode::schema: return KP_ERR_SCHEMA;
    case ErrorCode::range: return KP_ERR_RANGE;
    case ErrorCode::truncation: return KP_ERR_TRUNCATION;
    case ErrorCode::domain:
    case ErrorCode::division_domain: return KP_ERR_DOMAIN;
    case ErrorCode::io: return KP_ERR_IO;
    case ErrorCode::invariant: return KP_ERR_INVARIANT;
  }
  return KP_ERR_INTERNAL;
}

kp_status fail(kp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes and the thread-local
// message. fn returns KP_OK on success.
template <typename Fn>
kp_status guarded(Fn&& fn) {
  try {
    const kp_status s = fn();
    if (s == KP_OK) g_last_error.clear();
    return s;
  } catch (const kerrpol::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(KP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KP_ERR_INTERNAL, std::string("unexpected exception: ") + e.what());
  } catch (...) {
    return fail(KP_ERR_INTERNAL, "unexpected non-standard exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct kp_config {
  kerrpol::SweepConfig cfg;
};

struct kp_table {
  kerrpol::Table table;
};

namespace {

template <typename Runner>
kp_status run_to_table(const kp_config* config, kp_table** out, Runner&& runner) {
  return guarded([&]() -> kp_status {
    if (!config || !out) return fail(KP_ERR_INVALID_ARGUMENT, "config and out must be non-null");
    auto table = std::make_unique<kp_table>();
    table->table = runner(config->cfg);
    *out = table.release();
    return KP_OK;
  });
}

}  // namespace

extern "C" {

const char* kp_version(void) { return kerrpol::kVersion; }

const char* kp_status_name(kp_status status) {
  switch (status) {
    case KP_OK: return "KP_OK";
    case KP_ERR_PARSE: return "KP_ERR_PARSE";
    case KP_ERR_SCHEMA: return "KP_ERR_SCHEMA";
    case KP_ERR_RANGE: return "KP_ERR_RANGE";
    case KP_ERR_TRUNCATION: return "KP_ERR_TRUNCATION";
    case KP_ERR_DOMAIN: return "KP_ERR_DOMAIN";
    case KP_ERR_IO: return "KP_ERR_IO";
    case KP_ERR_INVARIANT: return "KP_ERR_INVARIANT";
    case KP_ERR_INVALID_ARGUMENT: return "KP_ERR_INVALID_ARGUMENT";
    case KP_ERR_INTERNAL: return "KP_ERR_INTERNAL";
  }
  return "KP_ERR_UNKNOWN";
}

const char* kp_last_error_message(void) { return g_last_error.c_str(); }

kp_status kp_config_parse_file(const char* path, kp_config** out) {
  return guarded([&]() -> kp_status {
    if (!path || !out) return fail(KP_ERR_INVALID_ARGUMENT, "path and out must be non-null");
    auto cfg = std::make_unique<kp_config>();
    cfg->cfg = kerrpol::parse_config_file(path);
    *out = cfg.release();
    return KP_OK;
  });
}

kp_status kp_config_parse_text(const char* text, kp_config** out) {
  return guarded([&]() -> kp_status {
    if (!text || !out) return fail(KP_ERR_INVALID_ARGUMENT, "text and out must be non-null");
    auto cfg = std::make_unique<kp_config>();
    cfg->cfg = kerrpol::parse_config_text(text);
    *out = cfg.release();
    return KP_OK;
  });
}

kp_status kp_config_override_engine(kp_config* config, const char* engine) {
  return guarded([&]() -> kp_status {
    if (!config || !engine) {
      return fail(KP_ERR_INVALID_ARGUMENT, "config and engine must be non-null");
    }
    // Validate on a copy so a rejected override leaves the config usable.
    kerrpol::SweepConfig trial = config->cfg;
    kerrpol::override_engine(trial, kerrpol::engine_from_name(engine));
    config->cfg = std::move(trial);
    return KP_OK;
  });
}

kp_status kp_config_has_grid(const kp_config* config, int* has_grid) {
  return guarded([&]() -> kp_status {
    if (!config || !has_grid) {
      return fail(KP_ERR_INVALID_ARGUMENT, "config and has_grid must be non-null");
    }
    *has_grid = config->cfg.grid.has_value() ? 1 : 0;
    return KP_OK;
  });
}

void kp_config_free(kp_config* config) { delete config; }

kp_status kp_run_sweep(const kp_config* config, kp_table** out) {
  return run_to_table(config, out, [](const kerrpol::SweepConfig& c) { return kerrpol::run_sweep(c); });
}

kp_status kp_run_point(const kp_config* config, kp_table** out) {
  return run_to_table(config, out, [](const kerrpol::SweepConfig& c) { return kerrpol::run_point(c); });
}

kp_status kp_run_seed_scan(const kp_config* config, kp_table** out) {
  return run_to_table(config, out,
                      [](const kerrpol::SweepConfig& c) { return kerrpol::run_seed_scan(c); });
}

kp_status kp_fig1_table(char panel, const char* engine, kp_table** out) {
  return guarded([&]() -> kp_status {
    if (!engine || !out) return fail(KP_ERR_INVALID_ARGUMENT, "engine and out must be non-null");
    auto table = std::make_unique<kp_table>();
    table->table = kerrpol::fig1_table(panel, kerrpol::engine_from_name(engine));
    *out = table.release();
    return KP_OK;
  });
}

kp_status kp_table_num_rows(const kp_table* table, int64_t* out) {
  return guarded([&]() -> kp_status {
    if (!table || !out) return fail(KP_ERR_INVALID_ARGUMENT, "table and out must be non-null");
    *out = static_cast<int64_t>(table->table.rows.size());
    return KP_OK;
  });
}

kp_status kp_table_num_columns(const kp_table* table, int64_t* out) {
  return guarded([&]() -> kp_status {
    if (!table || !out) return fail(KP_ERR_INVALID_ARGUMENT, "table and out must be non-null");
    *out = static_cast<int64_t>(table->table.columns.size());
    return KP_OK;
  });
}

kp_status kp_table_column_name(const kp_table* table, int64_t column, const char** out) {
  return guarded([&]() -> kp_status {
    if (!table || !out) return fail(KP_ERR_INVALID_ARGUMENT, "table and out must be non-null");
    if (column < 0 || column >= static_cast<int64_t>(table->table.columns.size())) {
      return fail(KP_ERR_INVALID_ARGUMENT, "column index out of range");
    }
    *out = table->table.columns[static_cast<size_t>(column)].c_str();
    return KP_OK;
  });
}

kp_status kp_table_cell(const kp_table* table, int64_t row, int64_t column, double* out) {
  return guarded([&]() -> kp_status {
    if (!table || !out) return fail(KP_ERR_INVALID_ARGUMENT, "table and out must be non-null");
    if (row < 0 || row >= static_cast<int64_t>(table->table.rows.size())) {
      return fail(KP_ERR_INVALID_ARGUMENT, "row index out of range");
    }
    const auto& cells = table->table.rows[static_cast<size_t>(row)];
    if (column < 0 || column >= static_cast<int64_t>(cells.size())) {
      return fail(KP_ERR_INVALID_ARGUMENT, "column index out of range");
    }
    *out = cells[static_cast<size_t>(column)];
    return KP_OK;
  });
}

kp_status kp_table_row_status(const kp_table* table, int64_t row, const char** out) {
  return guarded([&]() -> kp_status {
    if (!table || !out) return fail(KP_ERR_INVALID_ARGUMENT, "table and out must be non-null");
    if (row < 0 || row >= static_cast<int64_t>(table->table.row_status.size())) {
      return fail(KP_ERR_INVALID_ARGUMENT, "row index out of range");
    }
    *out = table->table.row_status[static_cast<size_t>(row)].c_str();
    return KP_OK;
  });
}

kp_status kp_table_emit_file(const kp_table* table, const char* path, const char* format,
                             int fixed_metadata) {
  return guarded([&]() -> kp_status {
    if (!table || !path || !format) {
      return fail(KP_ERR_INVALID_ARGUMENT, "table, path and format must be non-null");
    }
    kerrpol::emit_table_file(table->table, path, kerrpol::table_format_from_name(format),
                             fixed_metadata != 0);
    return KP_OK;
  });
}

kp_status kp_table_emit_string(const kp_table* table, const char* format, int fixed_metadata,
                               char** out) {
  return guarded([&]() -> kp_status {
    if (!table || !format || !out) {
      return fail(KP_ERR_INVALID_ARGUMENT, "table, format and out must be non-null");
    }
    *out = copy_string(kerrpol::emit_table(table->table,
                                           kerrpol::table_format_from_name(format),
                                           fixed_metadata != 0));
    return KP_OK;
  });
}

void kp_string_free(char* s) { std::free(s); }

void kp_table_free(kp_table* table) { delete table; }

kp_status kp_selftest(const char* inject_fault, char** report, int* all_pass) {
  return guarded([&]() -> kp_status {
    if (!all_pass) return fail(KP_ERR_INVALID_ARGUMENT, "all_pass must be non-null");
    const kerrpol::SelfTestReport r =
        kerrpol::run_selftest(inject_fault ? std::string(inject_fault) : std::string());
    if (report) *report = copy_string(kerrpol::format_selftest(r));
    *all_pass = r.all_pass ? 1 : 0;
    return KP_OK;
  });
}

}  // extern "C"

#include "carleman.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "carleman/pipeline.hpp"

struct ck_operator {
  carleman::OperatorSpec spec;
};

struct ck_pipeline {
  std::unique_ptr<carleman::Pipeline> p;
};

namespace {

thread_local std::string g_last_error;

ck_status status_of(carleman::ErrorCode code) {
  switch (code) {
    case carleman::ErrorCode::invalid_argument: return CK_INVALID_ARGUMENT;
    case carleman::ErrorCode::parse: return CK_PARSE;
    case carleman::ErrorCode::out_of_range: return CK_RANGE;
    case carleman::ErrorCode::budget_exhausted: return CK_BUDGET;
    case carleman::ErrorCode::numeric: return CK_NUMERIC;
    case carleman::ErrorCode::io: return CK_IO;
  }
  return CK_INTERNAL;
}

template <class F>
ck_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CK_OK;
  } catch (const carleman::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("config: ") + e.what();
    return CK_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CK_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CK_INTERNAL;
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw carleman::Error(carleman::ErrorCode::invalid_argument, what);
}

}  // namespace

extern "C" {

const char* ck_version(void) { return "1.0.0"; }

const char* ck_last_error(void) { return g_last_error.c_str(); }

void ck_string_free(char* s) { std::free(s); }

ck_status ck_config_apply_env(const char* config_json, char** out) {
  return guarded([&] {
    require(config_json && out, "null argument");
    nlohmann::json doc = nlohmann::json::parse(config_json);
    doc = carleman::apply_env_overrides(std::move(doc), carleman::carleman_environment());
    *out = copy_out(doc.dump());
  });
}

ck_status ck_operator_load(const char* config_json, ck_operator** out) {
  return guarded([&] {
    require(config_json && out, "null argument");
    auto op = std::make_unique<ck_operator>();
    op->spec = carleman::load_operator(std::string_view(config_json));
    *out = op.release();
  });
}

void ck_operator_free(ck_operator* op) { delete op; }

ck_status ck_operator_dim(const ck_operator* op, size_t* dim) {
  return guarded([&] {
    require(op && dim, "null argument");
    *dim = static_cast<size_t>(op->spec.dim);
  });
}

ck_status ck_validate(const char* config_json, char** report, int* pass) {
  return guarded([&] {
    require(config_json && report && pass, "null argument");
    const auto doc = carleman::validate_config(carleman::parse_run_config(std::string_view(config_json)));
    *pass = doc.at("pass").get<bool>() ? 1 : 0;
    *report = copy_out(carleman::dump_report(doc));
  });
}

ck_status ck_pipeline_build(const char* config_json, ck_pipeline** out) {
  return guarded([&] {
    require(config_json && out, "null argument");
    auto h = std::make_unique<ck_pipeline>();
    h->p = carleman::build_pipeline(carleman::parse_run_config(std::string_view(config_json)));
    *out = h.release();
  });
}

void ck_pipeline_free(ck_pipeline* p) { delete p; }

ck_status ck_pipeline_size(const ck_pipeline* p, size_t* frame_size) {
  return guarded([&] {
    require(p && frame_size, "null argument");
    *frame_size = static_cast<size_t>(p->p->kernel->size());
  });
}

ck_status ck_pipeline_model_text(const ck_pipeline* p, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = copy_out(carleman::dump_report(carleman::model_document(*p->p)));
  });
}

ck_status ck_pipeline_assignment_report(const ck_pipeline* p, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = copy_out(carleman::dump_report(carleman::assignment_report(*p->p)));
  });
}

ck_status ck_kernel_eval(const ck_pipeline* p, int i, int j, double s, double t, double* re, double* im,
                         double* residual) {
  return guarded([&] {
    require(p && re && im, "null argument");
    const auto v = p->p->kernel->eval(i, j, s, t, residual);
    *re = v.real();
    *im = v.imag();
  });
}

ck_status ck_kernel_eval_grid(const ck_pipeline* p, int i, int j, const double* s, size_t ns, const double* t,
                              size_t nt, double* re, double* im) {
  return guarded([&] {
    require(p && (ns == 0 || s) && (nt == 0 || t) && re && im, "null argument");
    for (size_t a = 0; a < ns; ++a)
      for (size_t b = 0; b < nt; ++b) {
        const auto v = p->p->kernel->eval(i, j, s[a], t[b]);
        re[a * nt + b] = v.real();
        im[a * nt + b] = v.imag();
      }
  });
}

ck_status ck_carleman_function(const ck_pipeline* p, double s, double* coeffs, size_t len, double* norm) {
  return guarded([&] {
    require(p && norm, "null argument");
    const auto row = p->p->kernel->carleman_function(s);
    const size_t n = static_cast<size_t>(row.coeffs.size());
    require(coeffs == nullptr || len >= 2 * n, "coefficient buffer too small");
    if (coeffs)
      for (size_t a = 0; a < n; ++a) {
        coeffs[2 * a] = row.coeffs(static_cast<carleman::Index>(a)).real();
        coeffs[2 * a + 1] = row.coeffs(static_cast<carleman::Index>(a)).imag();
      }
    *norm = row.norm;
  });
}

ck_status ck_pipeline_verify(const ck_pipeline* p, uint64_t seed, char** report, int* all_pass) {
  return guarded([&] {
    require(p && report && all_pass, "null argument");
    carleman::VerifyOptions opts = p->p->config.verify;
    opts.seed = seed;
    carleman::VerifyInputs in;
    in.spec = &p->p->spec;
    in.aux = &p->p->aux;
    in.assignment = &p->p->assignment;
    in.model = p->p->kernel.get();
    const auto doc = carleman::verify_report(carleman::run_verification(in, opts));
    *all_pass = doc.at("all_pass").get<bool>() ? 1 : 0;
    *report = copy_out(carleman::dump_report(doc));
  });
}

ck_status ck_wavelet_sample_table(const ck_pipeline* p, int i, double lo, double hi, int points, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    std::ostringstream os;
    p->p->wavelet->write_sample_table(os, i, lo, hi, points);
    *out = copy_out(os.str());
  });
}

}  // extern "C"

#include "loewner_qd.h"

#include "log.hpp"
#include "lqd/errors.hpp"
#include "lqd/io.hpp"
#include "lqd/job.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

struct lqd_job {
    lqd::Job job;
};

struct lqd_result {
    lqd::RunOutput out;
    std::string stop_reason;
    std::string message;
};

namespace {

thread_local std::string last_error;

lqd_status status_of(lqd::ErrorKind kind)
{
    using lqd::ErrorKind;
    switch (kind) {
    case ErrorKind::parse: return LQD_ERR_PARSE;
    case ErrorKind::domain:
    case ErrorKind::degenerate:
    case ErrorKind::invalid_direction:
    case ErrorKind::self_intersection:
    case ErrorKind::boundary_exit:
    case ErrorKind::empty_overlap: return LQD_ERR_INVALID;
    default: return LQD_ERR_NUMERICAL;
    }
}

template <typename F>
lqd_status guarded(F &&f)
{
    last_error.clear();
    try {
        return f();
    } catch (const lqd::Error &e) {
        last_error = std::string(lqd::to_string(e.kind())) + ": " + e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
    } catch (const std::exception &e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return LQD_ERR_INTERNAL;
}

lqd_status null_arg(const char *what)
{
    last_error = std::string("null ") + what;
    return LQD_ERR_NULL;
}

lqd_status out_of_range(const char *what)
{
    last_error = std::string(what) + " index out of range";
    return LQD_ERR_RANGE;
}

const std::vector<lqd::Sample> *single_samples(const lqd_result *r)
{
    return r->out.command == lqd::Command::multi || r->out.command == lqd::Command::radial ? nullptr
                                                                                           : &r->out.trace.samples;
}

} // namespace

extern "C" {

const char *lqd_version(void) { return "0.1.0"; }

const char *lqd_last_error(void) { return last_error.c_str(); }

const char *lqd_status_name(lqd_status status)
{
    switch (status) {
    case LQD_OK: return "ok";
    case LQD_ERR_PARSE: return "parse error";
    case LQD_ERR_INVALID: return "invalid input";
    case LQD_ERR_NUMERICAL: return "numerical failure";
    case LQD_ERR_IO: return "i/o error";
    case LQD_ERR_NULL: return "null argument";
    case LQD_ERR_RANGE: return "index out of range";
    case LQD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

lqd_status lqd_set_log_level(const char *level)
{
    if (!level)
        return null_arg("level");
    return guarded([&] {
        lqd::configure_logging();
        if (!lqd::set_log_level(level))
            lqd::fail(lqd::ErrorKind::parse, std::string("unknown log level '") + level + "' (off, info, debug)");
        return LQD_OK;
    });
}

lqd_status lqd_command_from_name(const char *name, lqd_command *out)
{
    if (!name || !out)
        return null_arg("argument");
    return guarded([&] {
        *out = static_cast<lqd_command>(lqd::command_from_string(name));
        return LQD_OK;
    });
}

lqd_status lqd_job_load(const char *path, lqd_job **out)
{
    if (!path || !out)
        return null_arg("argument");
    *out = nullptr;
    return guarded([&] {
        *out = new lqd_job{lqd::load_job(path)};
        return LQD_OK;
    });
}

lqd_status lqd_job_parse(const char *json_text, lqd_job **out)
{
    if (!json_text || !out)
        return null_arg("argument");
    *out = nullptr;
    return guarded([&] {
        *out = new lqd_job{lqd::parse_job(json_text)};
        return LQD_OK;
    });
}

void lqd_job_free(lqd_job *job) { delete job; }

lqd_status lqd_job_set_step(lqd_job *job, double h)
{
    if (!job)
        return null_arg("job");
    return guarded([&] {
        if (!(h > 0) || !std::isfinite(h))
            lqd::fail(lqd::ErrorKind::domain, "step h must be positive");
        job->job.config.h = h;
        return LQD_OK;
    });
}

lqd_status lqd_job_set_order(lqd_job *job, int order)
{
    if (!job)
        return null_arg("job");
    return guarded([&] {
        if (order < 1 || order > 8)
            lqd::fail(lqd::ErrorKind::domain, "order must be between 1 and 8");
        job->job.config.order = order;
        return LQD_OK;
    });
}

lqd_status lqd_job_set_n_subdiv(lqd_job *job, int n_subdiv)
{
    if (!job)
        return null_arg("job");
    return guarded([&] {
        if (n_subdiv < 1)
            lqd::fail(lqd::ErrorKind::domain, "n_subdiv must be at least 1");
        job->job.n_subdiv = n_subdiv;
        return LQD_OK;
    });
}

lqd_status lqd_job_set_check_tolerance(lqd_job *job, double tol)
{
    if (!job)
        return null_arg("job");
    return guarded([&] {
        if (!(tol > 0))
            lqd::fail(lqd::ErrorKind::domain, "check tolerance must be positive");
        job->job.check_tolerance = tol;
        return LQD_OK;
    });
}

lqd_status lqd_run(const lqd_job *job, lqd_command command, lqd_result **out)
{
    if (!job || !out)
        return null_arg("argument");
    *out = nullptr;
    if (command < LQD_CMD_TRACE || command > LQD_CMD_CHECK) {
        last_error = "unknown command";
        return LQD_ERR_PARSE;
    }
    return guarded([&] {
        auto r = new lqd_result;
        try {
            r->out = lqd::run_job(job->job, static_cast<lqd::Command>(command));
        } catch (...) {
            delete r;
            throw;
        }
        r->stop_reason = lqd::stop_reason_of(r->out);
        switch (r->out.command) {
        case lqd::Command::multi: r->message = r->out.multi.message; break;
        case lqd::Command::radial: r->message = r->out.radial.message; break;
        default: r->message = r->out.trace.message; break;
        }
        *out = r;
        return LQD_OK;
    });
}

void lqd_result_free(lqd_result *result) { delete result; }

size_t lqd_result_sample_count(const lqd_result *r)
{
    if (!r)
        return 0;
    switch (r->out.command) {
    case lqd::Command::multi: return r->out.multi.samples.size();
    case lqd::Command::radial: return r->out.radial.samples.size();
    default: return r->out.trace.samples.size();
    }
}

size_t lqd_result_driver_count(const lqd_result *r)
{
    if (!r)
        return 0;
    if (r->out.command == lqd::Command::multi)
        return r->out.multi.samples.empty() ? 0 : r->out.multi.samples.front().xis.size();
    return 1;
}

lqd_status lqd_result_time(const lqd_result *r, size_t i, double *t)
{
    if (!r || !t)
        return null_arg("argument");
    if (i >= lqd_result_sample_count(r))
        return out_of_range("sample");
    if (r->out.command == lqd::Command::multi)
        *t = r->out.multi.samples[i].t;
    else if (r->out.command == lqd::Command::radial)
        *t = r->out.radial.samples[i].t;
    else
        *t = r->out.trace.samples[i].t;
    return LQD_OK;
}

lqd_status lqd_result_xi(const lqd_result *r, size_t i, size_t driver, double *xi)
{
    if (!r || !xi)
        return null_arg("argument");
    if (i >= lqd_result_sample_count(r))
        return out_of_range("sample");
    if (driver >= lqd_result_driver_count(r))
        return out_of_range("driver");
    if (r->out.command == lqd::Command::multi)
        *xi = r->out.multi.samples[i].xis[driver];
    else if (r->out.command == lqd::Command::radial)
        *xi = r->out.radial.samples[i].xi;
    else
        *xi = r->out.trace.samples[i].xi;
    return LQD_OK;
}

lqd_status lqd_result_tip(const lqd_result *r, size_t i, double *re, double *im)
{
    if (!r || !re || !im)
        return null_arg("argument");
    if (i >= lqd_result_sample_count(r))
        return out_of_range("sample");
    lqd::cplx z;
    if (r->out.command == lqd::Command::multi) {
        last_error = "multi runs do not track tips";
        return LQD_ERR_INVALID;
    }
    if (r->out.command == lqd::Command::radial)
        z = r->out.radial.samples[i].tip;
    else
        z = single_samples(r)->at(i).tip;
    *re = z.real();
    *im = z.imag();
    return LQD_OK;
}

lqd_status lqd_result_residual(const lqd_result *r, size_t i, double *residual)
{
    if (!r || !residual)
        return null_arg("argument");
    if (i >= lqd_result_sample_count(r))
        return out_of_range("sample");
    if (r->out.command == lqd::Command::multi)
        *residual = r->out.multi.samples[i].residual;
    else if (r->out.command == lqd::Command::radial)
        *residual = r->out.radial.samples[i].residual;
    else
        *residual = r->out.trace.samples[i].residual;
    return LQD_OK;
}

const char *lqd_result_stop_reason(const lqd_result *r) { return r ? r->stop_reason.c_str() : ""; }

const char *lqd_result_message(const lqd_result *r) { return r ? r->message.c_str() : ""; }

int lqd_result_completed(const lqd_result *r) { return r && lqd::run_completed(r->out) ? 1 : 0; }

double lqd_result_deviation(const lqd_result *r)
{
    if (!r || r->out.command != lqd::Command::check)
        return std::numeric_limits<double>::quiet_NaN();
    return r->out.deviation;
}

lqd_status lqd_result_write_csv(const lqd_result *r, const char *path)
{
    if (!r || !path)
        return null_arg("argument");
    return guarded([&] {
        std::ofstream os(path);
        if (!os) {
            last_error = std::string("cannot open ") + path + " for writing";
            return LQD_ERR_IO;
        }
        lqd::write_csv(os, r->out);
        if (!os) {
            last_error = std::string("write failed for ") + path;
            return LQD_ERR_IO;
        }
        return LQD_OK;
    });
}

lqd_status lqd_result_write_svg(const lqd_result *r, const char *path)
{
    if (!r || !path)
        return null_arg("argument");
    return guarded([&] {
        std::ofstream os(path);
        if (!os) {
            last_error = std::string("cannot open ") + path + " for writing";
            return LQD_ERR_IO;
        }
        lqd::write_svg(os, r->out);
        if (!os) {
            last_error = std::string("write failed for ") + path;
            return LQD_ERR_IO;
        }
        return LQD_OK;
    });
}

} // extern "C"

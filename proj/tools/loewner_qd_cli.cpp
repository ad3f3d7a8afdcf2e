#include "loewner_qd.h"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Options {
    std::vector<std::string> jobs;
    std::string csv;
    std::string svg;
    double h = 0;
    int order = 0;
    int n_subdiv = 0;
    double tolerance = 0;
    int threads = 1;
};

std::mutex report_lock;

void report(const char *fmt, const std::string &a, const std::string &b = {})
{
    std::lock_guard<std::mutex> lock(report_lock);
    std::fprintf(stderr, fmt, a.c_str(), b.c_str());
}

// 0 ok, 1 bad input or i/o, 2 numerical failure or a run that stopped early
int exit_code(lqd_status s) { return s == LQD_ERR_NUMERICAL ? 2 : 1; }

int run_one(lqd_command command, const std::string &job_path, const std::string &csv, const std::string &svg,
            const Options &opt)
{
    lqd_job *job = nullptr;
    lqd_status s = lqd_job_load(job_path.c_str(), &job);
    if (s == LQD_OK && opt.h > 0)
        s = lqd_job_set_step(job, opt.h);
    if (s == LQD_OK && opt.order > 0)
        s = lqd_job_set_order(job, opt.order);
    if (s == LQD_OK && opt.n_subdiv > 0)
        s = lqd_job_set_n_subdiv(job, opt.n_subdiv);
    if (s == LQD_OK && opt.tolerance > 0)
        s = lqd_job_set_check_tolerance(job, opt.tolerance);
    if (s != LQD_OK) {
        report("%s: %s\n", job_path, lqd_last_error());
        lqd_job_free(job);
        return 1;
    }

    lqd_result *result = nullptr;
    s = lqd_run(job, command, &result);
    lqd_job_free(job);
    if (s != LQD_OK) {
        report("%s: %s\n", job_path, lqd_last_error());
        return exit_code(s);
    }

    int code = lqd_result_completed(result) ? 0 : 2;
    if (!csv.empty() && (s = lqd_result_write_csv(result, csv.c_str())) != LQD_OK) {
        report("%s: %s\n", job_path, lqd_last_error());
        code = std::max(code, 1);
    }
    if (!svg.empty() && (s = lqd_result_write_svg(result, svg.c_str())) != LQD_OK) {
        report("%s: %s\n", job_path, lqd_last_error());
        code = std::max(code, 1);
    }

    std::size_t n = lqd_result_sample_count(result);
    double t_end = 0;
    if (n > 0)
        lqd_result_time(result, n - 1, &t_end);
    char line[256];
    std::snprintf(line, sizeof line, "samples=%zu t_end=%.10g stop=%s", n, t_end, lqd_result_stop_reason(result));
    std::string summary = line;
    double dev = lqd_result_deviation(result);
    if (!std::isnan(dev)) {
        std::snprintf(line, sizeof line, " deviation=%.3e", dev);
        summary += line;
    }
    if (*lqd_result_message(result))
        summary += std::string(" (") + lqd_result_message(result) + ")";
    report("%s: %s\n", job_path, summary);
    lqd_result_free(result);
    return code;
}

int run_command(const std::string &name, const Options &opt)
{
    lqd_command command;
    if (lqd_command_from_name(name.c_str(), &command) != LQD_OK) {
        report("%s%s\n", lqd_last_error());
        return 1;
    }
    if (opt.jobs.size() == 1) {
        // without --csv the table goes to stdout
        std::string csv = opt.csv.empty() ? "/dev/stdout" : opt.csv;
        return run_one(command, opt.jobs[0], csv, opt.svg, opt);
    }

    // several jobs: --csv / --svg name directories, one file per job stem
    for (const auto *dir : {&opt.csv, &opt.svg}) {
        std::error_code ec;
        if (!dir->empty())
            fs::create_directories(*dir, ec);
        if (ec) {
            report("%s: %s\n", *dir, ec.message());
            return 1;
        }
    }
    std::atomic<std::size_t> next{0};
    std::vector<int> codes(opt.jobs.size(), 0);
    auto worker = [&] {
        for (std::size_t k = next++; k < opt.jobs.size(); k = next++) {
            std::string stem = fs::path(opt.jobs[k]).stem().string();
            std::string csv = opt.csv.empty() ? "" : (fs::path(opt.csv) / (stem + ".csv")).string();
            std::string svg = opt.svg.empty() ? "" : (fs::path(opt.svg) / (stem + ".svg")).string();
            codes[k] = run_one(command, opt.jobs[k], csv, svg, opt);
        }
    };
    std::size_t n_threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opt.threads, 1)), 1, opt.jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    return *std::max_element(codes.begin(), codes.end());
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Loewner driving functions of quadratic-differential trajectory slits"};
    // --h is the step size, so help is --help only
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lqd_version()));

    Options opt;
    const std::vector<std::pair<const char *, const char *>> commands{
        {"trace", "chordal ODE trace of a trajectory path"},
        {"multi", "several slits growing at once"},
        {"radial", "slit in the unit disc, conformal-radius time"},
        {"oracle", "driving function of a straight polyline by composing elementary slit maps"},
        {"check", "trace and oracle on the same path; exit 0 iff the sup deviation is below --tol"},
    };
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--job", opt.jobs, "job file (JSON); repeat for several")->required()->check(CLI::ExistingFile);
        sub->add_option("--csv", opt.csv, "CSV output (a directory when several jobs are given)");
        sub->add_option("--svg", opt.svg, "SVG output (a directory when several jobs are given)");
        sub->add_option("--h", opt.h, "base step in capacity time")->check(CLI::PositiveNumber);
        sub->add_option("--order", opt.order, "Taylor order")->check(CLI::Range(1, 8));
        sub->add_option("--jobs", opt.threads, "parallel workers for several job files")->check(CLI::PositiveNumber);
        if (std::string(name) == "oracle" || std::string(name) == "check")
            sub->add_option("--n-subdiv", opt.n_subdiv, "pieces per polyline edge")->check(CLI::PositiveNumber);
        if (std::string(name) == "check")
            sub->add_option("--tol", opt.tolerance, "pass threshold on the sup deviation")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return run_command(app.get_subcommands().front()->get_name(), opt);
}

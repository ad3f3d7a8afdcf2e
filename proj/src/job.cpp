#include "lqd/job.hpp"

#include "json.hpp"
#include "log.hpp"
#include "lqd/errors.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

namespace lqd {

namespace {

using nlohmann::json;
using std::numbers::pi;

[[noreturn]] void bad(const std::string &where, const std::string &what) { fail(ErrorKind::parse, where + ": " + what); }

double number(const json &j, const std::string &where)
{
    if (!j.is_number())
        bad(where, "expected a number");
    return j.get<double>();
}

double number_or(const json &obj, const char *key, double fallback, const std::string &where)
{
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, where + "." + key);
}

cplx complex_value(const json &j, const std::string &where)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        bad(where, "expected [re, im]");
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

Rational rational_value(const json &j, const std::string &where)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>());
    if (j.is_number())
        return parse_rational(std::to_string(j.get<double>()));
    bad(where, "expected a rational like \"-1/2\"");
}

const json &object_at(const json &parent, const char *key, const std::string &where)
{
    auto it = parent.find(key);
    if (it == parent.end())
        bad(where, std::string("missing \"") + key + "\"");
    if (!it->is_object())
        bad(where + "." + key, "expected an object");
    return *it;
}

// "phi" in radians or "phi_over_pi" as a number or rational string.
double angle(const json &obj, const std::string &where, double fallback, bool required)
{
    if (auto it = obj.find("phi_over_pi"); it != obj.end()) {
        if (it->is_string())
            return to_double(parse_rational(it->get<std::string>())) * pi;
        return number(*it, where + ".phi_over_pi") * pi;
    }
    if (auto it = obj.find("phi"); it != obj.end())
        return number(*it, where + ".phi");
    if (required)
        bad(where, "missing \"phi\" or \"phi_over_pi\"");
    return fallback;
}

FactorizedQD qd_from(const json &j)
{
    if (!j.is_object())
        bad("qd", "expected an object");
    cplx pref = 1;
    if (auto it = j.find("prefactor"); it != j.end())
        pref = complex_value(*it, "qd.prefactor");
    std::vector<Factor> factors;
    if (auto it = j.find("factors"); it != j.end()) {
        if (!it->is_array())
            bad("qd.factors", "expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const auto &f = (*it)[k];
            std::string where = "qd.factors[" + std::to_string(k) + "]";
            if (!f.is_object() || !f.contains("loc") || !f.contains("exp"))
                bad(where, "expected {\"loc\": [re, im], \"exp\": \"p/q\"}");
            factors.push_back({complex_value(f["loc"], where + ".loc"), rational_value(f["exp"], where + ".exp")});
        }
    }
    return FactorizedQD(pref, std::move(factors));
}

void read_config(const json &j, TraceConfig &c)
{
    if (!j.is_object())
        bad("config", "expected an object");
    c.h = number_or(j, "h", c.h, "config");
    if (auto it = j.find("order"); it != j.end()) {
        if (!it->is_number_integer())
            bad("config.order", "expected an integer");
        c.order = it->get<int>();
    }
    c.startup = number_or(j, "startup", c.startup, "config");
    c.tol_constraint = number_or(j, "tol_constraint", c.tol_constraint, "config");
    c.tol_startup = number_or(j, "tol_startup", c.tol_startup, "config");
    c.tol_collision = number_or(j, "tol_collision", c.tol_collision, "config");
    c.tol_imag = number_or(j, "tol_imag", c.tol_imag, "config");
    c.loop_threshold = number_or(j, "loop_threshold", c.loop_threshold, "config");
    c.newton.tol = number_or(j, "tol_newton", c.newton.tol, "config");
}

StopCriterion stop_from(const json &obj, const std::string &where)
{
    bool has_len = obj.contains("length"), has_cap = obj.contains("capacity");
    if (has_len == has_cap)
        bad(where, "give exactly one of \"length\" or \"capacity\"");
    if (has_len)
        return {StopCriterion::Kind::arclength, number(obj["length"], where + ".length")};
    return {StopCriterion::Kind::capacity, number(obj["capacity"], where + ".capacity")};
}

void read_path(const json &j, Job &job)
{
    if (auto it = j.find("start"); it != j.end()) {
        if (!it->is_object())
            bad("start", "expected an object");
        job.start.xi0 = number_or(*it, "xi0", 0, "start");
        if (it->contains("n"))
            job.start.n = rational_value((*it)["n"], "start.n");
        if (auto d = it->find("direction_index"); d != it->end()) {
            if (!d->is_number_integer())
                bad("start.direction_index", "expected an integer");
            job.start.direction_index = d->get<int>();
        }
    }

    int sources = j.contains("segments") + j.contains("lattice") + j.contains("polyline");
    if (sources > 1)
        bad("job", "give only one of \"segments\", \"lattice\", \"polyline\"");

    if (auto it = j.find("lattice"); it != j.end()) {
        const auto &l = *it;
        if (!l.is_object())
            bad("lattice", "expected an object");
        LatticePathSpec spec;
        if (!l.contains("kind") || !l["kind"].is_string())
            bad("lattice", "missing \"kind\"");
        spec.kind = lattice_kind_from_string(l["kind"].get<std::string>());
        spec.spacing = number_or(l, "spacing", 1, "lattice");
        spec.origin = number_or(l, "origin", 0, "lattice");
        if (!l.contains("moves") || !l["moves"].is_array())
            bad("lattice", "missing \"moves\" array");
        for (const auto &m : l["moves"]) {
            if (m.is_string())
                spec.moves.push_back(m.get<std::string>());
            else if (m.is_number())
                spec.moves.push_back(m.dump());
            else
                bad("lattice.moves", "moves are names or angles in degrees");
        }
        auto path = build_path(spec);
        job.segments = to_segments(path);
        job.polyline = path.polyline;
        if (!j.contains("start") || !j["start"].contains("xi0"))
            job.start.xi0 = spec.origin;
    } else if (auto it = j.find("polyline"); it != j.end()) {
        if (!it->is_array())
            bad("polyline", "expected an array of [re, im] vertices");
        Polyline pl;
        for (std::size_t k = 0; k < it->size(); ++k)
            pl.vertices.push_back(complex_value((*it)[k], "polyline[" + std::to_string(k) + "]"));
        job.segments = to_segments(pl);
        job.polyline = pl;
        if (!j.contains("start") || !j["start"].contains("xi0"))
            job.start.xi0 = pl.vertices.front().real();
    } else if (auto it = j.find("segments"); it != j.end()) {
        if (!it->is_array() || it->empty())
            bad("segments", "expected a non-empty array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const auto &s = (*it)[k];
            std::string where = "segments[" + std::to_string(k) + "]";
            if (!s.is_object())
                bad(where, "expected an object");
            PathSegment seg;
            seg.phi = angle(s, where, 0, true);
            seg.stop = stop_from(s, where);
            if (s.contains("heading"))
                seg.heading = complex_value(s["heading"], where + ".heading");
            if (auto t = s.find("turn"); t != s.end()) {
                std::string turn = t->is_string() ? t->get<std::string>() : "";
                if (turn == "left")
                    seg.turn = TurnHint::left;
                else if (turn == "right")
                    seg.turn = TurnHint::right;
                else if (turn != "none")
                    bad(where + ".turn", "expected \"left\", \"right\" or \"none\"");
            }
            job.segments.push_back(seg);
        }
    }
}

SlitStart slit_from(const json &s, const std::string &where)
{
    if (!s.is_object())
        bad(where, "expected an object");
    SlitStart out;
    if (!s.contains("xi0"))
        bad(where, "missing \"xi0\"");
    out.xi0 = number(s["xi0"], where + ".xi0");
    if (s.contains("n"))
        out.n = rational_value(s["n"], where + ".n");
    out.phi = angle(s, where, pi / 2, false);
    if (auto d = s.find("direction_index"); d != s.end()) {
        if (!d->is_number_integer())
            bad(where + ".direction_index", "expected an integer");
        out.direction_index = d->get<int>();
    }
    return out;
}

void read_multi(const json &m, Job &job)
{
    if (!m.contains("slits") || !m["slits"].is_array())
        bad("multi", "missing \"slits\" array");
    for (std::size_t k = 0; k < m["slits"].size(); ++k)
        job.slits.push_back(slit_from(m["slits"][k], "multi.slits[" + std::to_string(k) + "]"));
    if (auto it = m.find("weights"); it != m.end()) {
        if (!it->is_array())
            bad("multi.weights", "expected an array");
        for (const auto &w : *it)
            job.weights.push_back(number(w, "multi.weights"));
    } else {
        job.weights.assign(job.slits.size(), job.slits.empty() ? 0.0 : 1.0 / static_cast<double>(job.slits.size()));
    }
    if (!m.contains("capacity"))
        bad("multi", "missing \"capacity\" (final time)");
    job.multi_capacity = number(m["capacity"], "multi.capacity");
}

void read_radial(const json &r, Job &job)
{
    job.radial.xi0 = number_or(r, "xi0", 0, "radial");
    if (r.contains("n"))
        job.radial.n = rational_value(r["n"], "radial.n");
    job.radial.phi = angle(r, "radial", 0, false);
    if (auto d = r.find("direction_index"); d != r.end()) {
        if (!d->is_number_integer())
            bad("radial.direction_index", "expected an integer");
        job.radial.direction_index = d->get<int>();
    }
    job.radial_stop = stop_from(r, "radial");
    if (auto it = r.find("mode"); it != r.end()) {
        std::string mode = it->is_string() ? it->get<std::string>() : "";
        if (mode == "origin_mark")
            job.radial_mode = RadialMode::origin_mark;
        else if (mode == "as_printed")
            job.radial_mode = RadialMode::as_printed;
        else
            bad("radial.mode", "expected \"origin_mark\" or \"as_printed\"");
    }
}

// Vertices of a straight-segment path when Q == 1 and every segment has a heading.
std::optional<Polyline> polyline_from_segments(const Job &job)
{
    if (!job.qd.factors().empty())
        return std::nullopt;
    Polyline pl;
    cplx at(job.start.xi0, 0);
    pl.vertices.push_back(at);
    for (const auto &seg : job.segments) {
        if (!seg.heading || seg.stop.kind != StopCriterion::Kind::arclength)
            return std::nullopt;
        at += *seg.heading / std::abs(*seg.heading) * seg.stop.value;
        pl.vertices.push_back(at);
    }
    return pl;
}

Polyline oracle_path(const Job &job)
{
    if (job.polyline)
        return *job.polyline;
    if (auto pl = polyline_from_segments(job))
        return *pl;
    fail(ErrorKind::parse, "the oracle needs a straight path: give \"lattice\", \"polyline\", or segments with "
                           "headings and lengths over Q = 1");
}

} // namespace

const char *to_string(Command command)
{
    switch (command) {
    case Command::trace: return "trace";
    case Command::multi: return "multi";
    case Command::radial: return "radial";
    case Command::oracle: return "oracle";
    case Command::check: return "check";
    }
    return "unknown";
}

Command command_from_string(const std::string &name)
{
    for (auto c : {Command::trace, Command::multi, Command::radial, Command::oracle, Command::check})
        if (name == to_string(c))
            return c;
    fail(ErrorKind::parse, "unknown command '" + name + "'");
}

Job parse_job(const std::string &text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorKind::parse, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        bad("job", "expected a JSON object");

    Job job;
    try {
        if (j.contains("qd"))
            job.qd = qd_from(j["qd"]);
        if (j.contains("config"))
            read_config(j["config"], job.config);
        read_path(j, job);
        if (j.contains("oracle")) {
            const auto &o = object_at(j, "oracle", "job");
            if (auto it = o.find("n_subdiv"); it != o.end()) {
                if (!it->is_number_integer())
                    bad("oracle.n_subdiv", "expected an integer");
                job.n_subdiv = it->get<int>();
            }
        }
        if (j.contains("check"))
            job.check_tolerance = number_or(object_at(j, "check", "job"), "tolerance", job.check_tolerance, "check");
        if (j.contains("multi"))
            read_multi(object_at(j, "multi", "job"), job);
        if (j.contains("radial"))
            read_radial(object_at(j, "radial", "job"), job);
    } catch (const json::exception &e) {
        fail(ErrorKind::parse, std::string("malformed job: ") + e.what());
    }
    return job;
}

Job load_job(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::parse, "cannot open job file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_job(buf.str());
}

FactorizedQD parse_qd_json(const std::string &text)
{
    try {
        return qd_from(json::parse(text));
    } catch (const json::exception &e) {
        fail(ErrorKind::parse, std::string("invalid quadratic differential JSON: ") + e.what());
    }
}

std::string qd_to_json(const FactorizedQD &qd)
{
    json j;
    j["prefactor"] = {qd.prefactor().real(), qd.prefactor().imag()};
    j["factors"] = json::array();
    for (const auto &f : qd.factors())
        j["factors"].push_back({{"loc", {f.loc.real(), f.loc.imag()}}, {"exp", format_rational(f.exponent)}});
    return j.dump();
}

RunOutput run_job(const Job &job, Command command)
{
    job.config.validate();
    RunOutput out;
    out.command = command;
    log_info("running {}", to_string(command));
    switch (command) {
    case Command::trace:
        if (job.segments.empty())
            fail(ErrorKind::parse, "trace needs \"segments\", \"lattice\" or \"polyline\"");
        out.trace = trace(job.qd, job.start, job.segments, job.config);
        out.polyline = job.polyline;
        break;
    case Command::oracle: {
        OracleConfig oc;
        oc.newton = job.config.newton;
        out.polyline = oracle_path(job);
        out.trace = polyline_driving(*out.polyline, job.n_subdiv, oc);
        break;
    }
    case Command::check: {
        if (!job.qd.factors().empty())
            fail(ErrorKind::parse, "check compares against the straight-slit oracle and needs Q = 1");
        OracleConfig oc;
        oc.newton = job.config.newton;
        out.polyline = oracle_path(job);
        out.trace = trace(job.qd, job.start, job.segments, job.config);
        out.oracle = polyline_driving(*out.polyline, job.n_subdiv, oc);
        out.deviation = sup_deviation(out.trace, out.oracle);
        out.passed = out.deviation < job.check_tolerance;
        break;
    }
    case Command::multi:
        if (job.slits.empty())
            fail(ErrorKind::parse, "multi needs a \"multi\" block with slits");
        out.multi = multi_trace(job.qd, job.slits, job.weights, job.multi_capacity, job.config);
        break;
    case Command::radial: {
        if (!(job.radial_stop.value > 0))
            fail(ErrorKind::parse, "radial needs a \"radial\" block with a positive capacity or length");
        RadialConfig rc;
        rc.trace = job.config;
        rc.mode = job.radial_mode;
        out.radial = radial_trace(job.qd, job.radial, job.radial_stop, rc);
        break;
    }
    }
    return out;
}

std::string stop_reason_of(const RunOutput &out)
{
    switch (out.command) {
    case Command::multi: return to_string(out.multi.stop_reason);
    case Command::radial: return to_string(out.radial.stop_reason);
    default: return to_string(out.trace.stop_reason);
    }
}

bool run_completed(const RunOutput &out)
{
    StopReason r = out.command == Command::multi    ? out.multi.stop_reason
                   : out.command == Command::radial ? out.radial.stop_reason
                                                    : out.trace.stop_reason;
    bool reached = r == StopReason::capacity_reached || r == StopReason::length_reached;
    return reached && (out.command != Command::check || out.passed);
}

} // namespace lqd

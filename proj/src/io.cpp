#include "lqd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace lqd {

namespace {

template <typename Row>
std::size_t mark_groups(const std::vector<Row> &rows)
{
    std::size_t n = 0;
    for (const auto &r : rows)
        n = std::max(n, r.marks.size());
    return n;
}

void mark_header(std::ostream &os, std::size_t groups)
{
    for (std::size_t i = 0; i < groups; ++i)
        os << ",mark" << i << "_re,mark" << i << "_im,mark" << i << "_exp";
}

void mark_cells(std::ostream &os, const std::vector<MarkedPoint> &marks, std::size_t groups)
{
    for (std::size_t i = 0; i < groups; ++i) {
        if (i < marks.size())
            os << ',' << format_double(marks[i].position.real()) << ',' << format_double(marks[i].position.imag())
               << ',' << format_rational(marks[i].exponent);
        else
            os << ",,,";
    }
}

void stop_cell(std::ostream &os, bool last, const char *reason)
{
    os << ',';
    if (last)
        os << reason;
    os << '\n';
}

// --- svg ---

struct Curve {
    std::vector<std::pair<double, double>> points;
    const char *color;
    bool dots = false;
};

struct Panel {
    std::string title, xlabel, ylabel;
    std::vector<Curve> curves;
    bool equal_aspect = false;
    // y = 0 axis for the half-plane, unit circle for the disc
    bool real_axis = false;
    bool unit_circle = false;
};

const char *palette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#17a589"};

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

void draw_panel(std::ostream &os, const Panel &p, double left, double top, double width, double height)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &c : p.curves)
        for (auto [x, y] : c.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (p.unit_circle) {
        x0 = std::min(x0, -1.0);
        x1 = std::max(x1, 1.0);
        y0 = std::min(y0, -1.0);
        y1 = std::max(y1, 1.0);
    }
    if (p.real_axis)
        y0 = std::min(y0, 0.0);
    if (!std::isfinite(x0)) {
        x0 = y0 = 0;
        x1 = y1 = 1;
    }
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx;
    x1 += padx;
    y0 -= pady;
    y1 += pady;

    const double margin = 50;
    double w = width - 2 * margin, h = height - 2 * margin;
    double sx = w / (x1 - x0), sy = h / (y1 - y0);
    if (p.equal_aspect) {
        double s = std::min(sx, sy);
        double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
        sx = sy = s;
        x0 = cx - w / (2 * s);
        x1 = cx + w / (2 * s);
        y0 = cy - h / (2 * s);
        y1 = cy + h / (2 * s);
    }
    auto X = [&](double x) { return left + margin + (x - x0) * sx; };
    auto Y = [&](double y) { return top + margin + (y1 - y) * sy; };

    os << "<rect x=\"" << left + margin << "\" y=\"" << top + margin << "\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"none\" stroke=\"#999\"/>\n";
    os << "<text x=\"" << left + width / 2 << "\" y=\"" << top + 30 << "\" text-anchor=\"middle\">" << p.title
       << "</text>\n";
    os << "<text x=\"" << left + width / 2 << "\" y=\"" << top + height - 10 << "\" text-anchor=\"middle\">"
       << p.xlabel << "</text>\n";
    os << "<text x=\"" << left + 12 << "\" y=\"" << top + height / 2 << "\" text-anchor=\"middle\">" << p.ylabel
       << "</text>\n";
    // range labels at the frame corners
    os << "<text x=\"" << left + margin << "\" y=\"" << top + margin + h + 15 << "\" font-size=\"10\">" << num(x0)
       << "</text>\n";
    os << "<text x=\"" << left + margin + w << "\" y=\"" << top + margin + h + 15
       << "\" font-size=\"10\" text-anchor=\"end\">" << num(x1) << "</text>\n";
    os << "<text x=\"" << left + margin - 4 << "\" y=\"" << top + margin + h
       << "\" font-size=\"10\" text-anchor=\"end\">" << num(y0) << "</text>\n";
    os << "<text x=\"" << left + margin - 4 << "\" y=\"" << top + margin + 10
       << "\" font-size=\"10\" text-anchor=\"end\">" << num(y1) << "</text>\n";

    if (p.real_axis && y0 <= 0 && y1 >= 0)
        os << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(x1) << "\" y2=\"" << Y(0)
           << "\" stroke=\"#444\"/>\n";
    if (p.unit_circle)
        os << "<circle cx=\"" << X(0) << "\" cy=\"" << Y(0) << "\" r=\"" << sx << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (const auto &c : p.curves) {
        if (c.dots) {
            for (auto [x, y] : c.points)
                os << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"3\" fill=\"" << c.color << "\"/>\n";
            continue;
        }
        os << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : c.points)
            if (std::isfinite(x) && std::isfinite(y))
                os << X(x) << ',' << Y(y) << ' ';
        os << "\"/>\n";
    }
}

Curve tip_curve(const TraceResult &r, const char *color)
{
    Curve c{{}, color};
    for (const auto &s : r.samples)
        c.points.emplace_back(s.tip.real(), s.tip.imag());
    return c;
}

Curve xi_curve(const TraceResult &r, const char *color)
{
    Curve c{{}, color};
    for (const auto &s : r.samples)
        c.points.emplace_back(s.t, s.xi);
    return c;
}

} // namespace

std::string format_double(double x)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

void write_csv(std::ostream &os, const TraceResult &r, bool with_marks)
{
    std::size_t groups = with_marks ? mark_groups(r.samples) : 0;
    os << "t,xi,gamma_re,gamma_im,arclength,residual";
    mark_header(os, groups);
    os << ",stop_reason\n";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const auto &s = r.samples[i];
        os << format_double(s.t) << ',' << format_double(s.xi) << ',' << format_double(s.tip.real()) << ','
           << format_double(s.tip.imag()) << ',' << format_double(s.arclength) << ',' << format_double(s.residual);
        mark_cells(os, s.marks, groups);
        stop_cell(os, i + 1 == r.samples.size(), to_string(r.stop_reason));
    }
}

void write_csv(std::ostream &os, const MultiTraceResult &r)
{
    std::size_t n = r.samples.empty() ? 0 : r.samples.front().xis.size();
    std::size_t groups = mark_groups(r.samples);
    os << 't';
    for (std::size_t k = 0; k < n; ++k)
        os << ",xi" << k + 1;
    os << ",residual";
    mark_header(os, groups);
    os << ",stop_reason\n";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const auto &s = r.samples[i];
        os << format_double(s.t);
        for (double xi : s.xis)
            os << ',' << format_double(xi);
        os << ',' << format_double(s.residual);
        mark_cells(os, s.marks, groups);
        stop_cell(os, i + 1 == r.samples.size(), to_string(r.stop_reason));
    }
}

void write_csv(std::ostream &os, const RadialTraceResult &r)
{
    std::size_t groups = mark_groups(r.samples);
    os << "t,xi,tip_re,tip_im,residual_mora,modulus_defect";
    mark_header(os, groups);
    // the other mode's numbers at the same state
    os << ",alt_residual_mora,alt_modulus_defect,xi_dot_imag,alt_xi_dot_imag,stop_reason\n";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const auto &s = r.samples[i];
        os << format_double(s.t) << ',' << format_double(s.xi) << ',' << format_double(s.tip.real()) << ','
           << format_double(s.tip.imag()) << ',' << format_double(s.residual) << ','
           << format_double(s.modulus_defect);
        mark_cells(os, s.marks, groups);
        os << ',' << format_double(s.alt_residual) << ',' << format_double(s.alt_modulus_defect) << ','
           << format_double(s.xi_dot_imag) << ',' << format_double(s.alt_xi_dot_imag);
        stop_cell(os, i + 1 == r.samples.size(), to_string(r.stop_reason));
    }
}

void write_csv(std::ostream &os, const RunOutput &out)
{
    switch (out.command) {
    case Command::multi: write_csv(os, out.multi); break;
    case Command::radial: write_csv(os, out.radial); break;
    case Command::oracle: write_csv(os, out.trace, false); break;
    default: write_csv(os, out.trace); break;
    }
}

void write_svg(std::ostream &os, const RunOutput &out)
{
    const double width = 1000, height = 480;
    Panel left, right;
    right.xlabel = "t";
    right.ylabel = "xi";
    right.title = "driving function";
    left.xlabel = "Re";
    left.ylabel = "Im";
    left.equal_aspect = true;

    switch (out.command) {
    case Command::trace:
    case Command::oracle:
    case Command::check: {
        left.title = "slit";
        left.real_axis = true;
        if (out.polyline) {
            Curve c{{}, "#bbbbbb"};
            for (cplx v : out.polyline->vertices)
                c.points.emplace_back(v.real(), v.imag());
            left.curves.push_back(c);
        }
        left.curves.push_back(tip_curve(out.trace, palette[0]));
        right.curves.push_back(xi_curve(out.trace, palette[0]));
        if (out.command == Command::check) {
            right.curves.push_back(xi_curve(out.oracle, palette[1]));
            right.title = "driving function (blue ODE, red oracle), sup dev " + num(out.deviation);
        }
        break;
    }
    case Command::multi: {
        // tips are not tracked for several slits; show the base points
        left.title = "base points";
        left.real_axis = true;
        left.equal_aspect = false;
        std::size_t n = out.multi.samples.empty() ? 0 : out.multi.samples.front().xis.size();
        Curve bases{{}, palette[0], true};
        for (std::size_t k = 0; k < n; ++k) {
            bases.points.emplace_back(out.multi.samples.front().xis[k], 0.0);
            Curve c{{}, palette[k % 6]};
            for (const auto &s : out.multi.samples)
                c.points.emplace_back(s.t, s.xis[k]);
            right.curves.push_back(c);
        }
        left.curves.push_back(bases);
        right.title = "driving functions";
        break;
    }
    case Command::radial: {
        left.title = "slit in the disc";
        left.unit_circle = true;
        Curve c{{}, palette[0]}, x{{}, palette[0]};
        for (const auto &s : out.radial.samples) {
            c.points.emplace_back(s.tip.real(), s.tip.imag());
            x.points.emplace_back(s.t, s.xi);
        }
        left.curves.push_back(c);
        right.curves.push_back(x);
        break;
    }
    }

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    draw_panel(os, left, 0, 0, width / 2, height);
    draw_panel(os, right, width / 2, 0, width / 2, height);
    os << "</svg>\n";
}

} // namespace lqd

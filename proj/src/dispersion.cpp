#include "wavemera/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "wavemera/error.hpp"
#include "wavemera/filters.hpp"

namespace wavemera {

namespace {

constexpr double kPi = std::numbers::pi;

// reduce to [0, π] using periodicity and ω(-k) = ω(k)
double fold(double k)
{
    double r = k - 2.0 * kPi * std::round(k / (2.0 * kPi));
    return std::abs(r);
}

} // namespace

struct Dispersion::Impl {
    Kind kind = Kind::harmonic;
    double m = 0.0;
    std::vector<double> ks, ws;
    std::shared_ptr<const Impl> base;
    int level = 0;
    double base_pi = 1.0;

    mutable std::mutex mu;
    mutable std::unordered_map<double, double> cache;

    double eval(double k) const
    {
        double x = fold(k);
        switch (kind) {
        case Kind::harmonic: {
            double s = std::sin(x / 2.0);
            return std::sqrt(m * m + s * s);
        }
        case Kind::tabulated: {
            if (x <= ks.front())
                return ws.front();
            if (x >= ks.back())
                return ws.back();
            auto it = std::upper_bound(ks.begin(), ks.end(), x);
            std::size_t i = static_cast<std::size_t>(it - ks.begin());
            double t = (x - ks[i - 1]) / (ks[i] - ks[i - 1]);
            return (1.0 - t) * ws[i - 1] + t * ws[i];
        }
        case Kind::renormalized: {
            {
                std::lock_guard<std::mutex> lock(mu);
                auto it = cache.find(x);
                if (it != cache.end())
                    return it->second;
            }
            double v = base->eval(x / 2.0) * base->eval(x / 2.0 + kPi) / (base_pi * base_pi);
            std::lock_guard<std::mutex> lock(mu);
            cache.emplace(x, v);
            return v;
        }
        }
        return 0.0;
    }

    const Impl* root() const { return kind == Kind::renormalized ? base->root() : this; }
};

Dispersion::Dispersion() : Dispersion(harmonic(0.0)) {}

Dispersion::Dispersion(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Dispersion Dispersion::harmonic(double m)
{
    if (!(m >= 0.0))
        throw Error(ErrorKind::NegativeMass, "mass must be nonnegative", {{"m", m}});
    auto p = std::make_shared<Impl>();
    p->kind = Kind::harmonic;
    p->m = m;
    return Dispersion(p);
}

Dispersion Dispersion::tabulated(std::vector<double> k, std::vector<double> w)
{
    if (k.size() != w.size() || k.size() < 2)
        throw std::invalid_argument("tabulated dispersion needs at least two (k, w) samples");
    std::vector<std::pair<double, double>> s;
    for (std::size_t i = 0; i < k.size(); ++i)
        s.emplace_back(fold(k[i]), w[i]);
    std::sort(s.begin(), s.end());
    auto p = std::make_shared<Impl>();
    p->kind = Kind::tabulated;
    for (auto& [x, v] : s) {
        if (!p->ks.empty() && x == p->ks.back())
            continue;
        if (v < 0.0)
            throw std::invalid_argument("tabulated dispersion must be nonnegative");
        p->ks.push_back(x);
        p->ws.push_back(v);
    }
    if (p->ks.size() < 2)
        throw std::invalid_argument("tabulated dispersion needs distinct |k| samples");
    return Dispersion(p);
}

Dispersion Dispersion::flat(double c) { return tabulated({0.0, kPi}, {c, c}); }

Dispersion Dispersion::parse(const std::string& spec)
{
    if (spec.rfind("harmonic:", 0) == 0) {
        std::string rest = spec.substr(9);
        if (rest.rfind("m=", 0) != 0)
            throw std::invalid_argument("expected harmonic:m=<real>, got " + spec);
        return harmonic(std::stod(rest.substr(2)));
    }
    if (spec.rfind("tabulated:", 0) == 0) {
        std::string path = spec.substr(10);
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open dispersion table " + path);
        std::vector<double> k, w;
        std::string line;
        while (std::getline(in, line)) {
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            double a, b;
            if (ss >> a >> b) {
                k.push_back(a);
                w.push_back(b);
            }
        }
        return tabulated(k, w);
    }
    throw std::invalid_argument("unknown dispersion specifier " + spec);
}

double Dispersion::operator()(double k) const { return impl_->eval(k); }
double Dispersion::at_pi() const { return impl_->eval(kPi); }
Dispersion::Kind Dispersion::kind() const { return impl_->kind; }
int Dispersion::level() const { return impl_->level; }

std::optional<double> Dispersion::base_mass() const
{
    const Impl* r = impl_->root();
    if (r->kind == Kind::harmonic)
        return r->m;
    return std::nullopt;
}

std::string Dispersion::describe() const
{
    const Impl* r = impl_->root();
    std::ostringstream os;
    os.precision(17);
    if (r->kind == Kind::harmonic)
        os << "harmonic:m=" << r->m;
    else
        os << "tabulated";
    if (impl_->level > 0)
        os << "@level=" << impl_->level;
    return os.str();
}

Dispersion Dispersion::renormalized() const
{
    auto p = std::make_shared<Impl>();
    p->kind = Kind::renormalized;
    p->base = impl_;
    p->level = impl_->level + 1;
    p->base_pi = impl_->eval(kPi);
    if (!(p->base_pi > 0.0))
        throw std::invalid_argument("renormalization needs ω(π) > 0");
    return Dispersion(p);
}

Dispersion harmonic(double m) { return Dispersion::harmonic(m); }

Dispersion renormalize(const Dispersion& d) { return d.renormalized(); }

Dispersion renormalize(const Dispersion& d, int levels)
{
    Dispersion out = d;
    for (int i = 0; i < levels; ++i)
        out = out.renormalized();
    return out;
}

std::vector<double> mass_flow(double m, int levels)
{
    if (!(m >= 0.0))
        throw Error(ErrorKind::NegativeMass, "mass must be nonnegative", {{"m", m}});
    std::vector<double> out{m};
    for (int l = 0; l < levels; ++l) {
        m = 2.0 * std::sqrt(m * m + m * m * m * m);
        out.push_back(m);
    }
    return out;
}

double fitted_mass(const Dispersion& d, int grid)
{
    // centered regression keeps offset and slope well separated
    std::vector<double> x, y;
    for (double k : k_grid(grid)) {
        double s = std::sin(k / 2.0);
        double w = d(k);
        x.push_back(s * s);
        y.push_back(w * w);
    }
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    double beta = sxy / sxx;
    double alpha = my - beta * mx;
    return std::sqrt(std::max(alpha / beta, 0.0));
}

double massless_shape_deviation(const Dispersion& d, int grid)
{
    double wp = d.at_pi();
    double m = 0.0;
    for (double k : k_grid(grid))
        m = std::max(m, std::abs(d(k) / wp - std::abs(std::sin(k / 2.0))));
    return m;
}

bool is_massless_shape(const Dispersion& d, int grid, double tol) { return massless_shape_deviation(d, grid) < tol; }

double FlowReport::Omega() const
{
    double o = 0.0;
    for (const auto& l : levels)
        o = std::max(o, l.sup_omega);
    return o;
}

FlowReport flow_report(const Dispersion& d, int levels, int grid)
{
    FlowReport rep;
    Dispersion cur = d;
    std::optional<double> m0 = d.level() == 0 ? d.base_mass() : std::nullopt;
    std::vector<double> flow;
    if (m0)
        flow = mass_flow(*m0, levels);
    auto ks = k_grid(grid);
    for (int l = 0; l <= levels; ++l) {
        FlowLevel fl;
        fl.l = l;
        fl.omega_pi = cur.at_pi();
        for (double k : ks) {
            double w = cur(k);
            fl.sup_omega = std::max(fl.sup_omega, w);
            fl.flatness = std::max(fl.flatness, std::abs(w / fl.omega_pi - 1.0));
        }
        if (d.base_mass()) {
            fl.fitted_mass = fitted_mass(cur, grid);
            if (m0)
                fl.closed_form_mass = flow[l];
        }
        rep.levels.push_back(fl);
        if (l < levels)
            cur = cur.renormalized();
    }
    return rep;
}

} // namespace wavemera

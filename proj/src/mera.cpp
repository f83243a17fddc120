#include "wavemera/mera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "wavemera/continuum.hpp"
#include "wavemera/error.hpp"

namespace wavemera {

namespace {

constexpr double kPi = std::numbers::pi;

int wrap(long v, int n)
{
    long r = v % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

int ring_distance(int a, int b, int N)
{
    int d = wrap(static_cast<long>(a) - b, N);
    return std::min(d, N - d);
}

// one periodized analysis step on the first n entries, in place
void analyze(const FilterPair& p, Channel c, std::vector<double>& x, int n)
{
    const FirFilter& s = p.scaling(c);
    const FirFilter& w = p.wavelet(c);
    std::vector<double> src(x.begin(), x.begin() + n);
    int h = n / 2;
    for (int i = 0; i < h; ++i) {
        double as = 0.0, aw = 0.0;
        for (int l = s.offset(); l <= s.last(); ++l)
            as += s[l] * src[wrap(2L * i + l, n)];
        for (int l = w.offset(); l <= w.last(); ++l)
            aw += w[l] * src[wrap(2L * i + l, n)];
        x[i] = as;
        x[h + i] = aw;
    }
}

// transpose of analyze
void analyze_t(const FilterPair& p, Channel c, std::vector<double>& y, int n)
{
    const FirFilter& s = p.scaling(c);
    const FirFilter& w = p.wavelet(c);
    std::vector<double> out(n, 0.0);
    int h = n / 2;
    for (int i = 0; i < h; ++i) {
        for (int l = s.offset(); l <= s.last(); ++l)
            out[wrap(2L * i + l, n)] += s[l] * y[i];
        for (int l = w.offset(); l <= w.last(); ++l)
            out[wrap(2L * i + l, n)] += w[l] * y[h + i];
    }
    std::copy(out.begin(), out.end(), y.begin());
}

double substack_norm(const std::vector<FilterPair>& pairs, int from, int to, Channel c, int N)
{
    std::vector<double> v(N);
    for (int i = 0; i < N; ++i)
        v[i] = 1.0 + 0.37 * std::sin(1.3 * i + 0.2);
    double sigma = 0.0;
    for (int it = 0; it < 2000; ++it) {
        double nv = 0.0;
        for (double x : v)
            nv += x * x;
        nv = std::sqrt(nv);
        for (double& x : v)
            x /= nv;
        int n = N;
        for (int l = from; l <= to; ++l, n /= 2)
            analyze(pairs[l], c, v, n);
        for (int l = to; l >= from; --l) {
            n *= 2;
            analyze_t(pairs[l], c, v, n);
        }
        double nu = 0.0;
        for (double x : v)
            nu += x * x;
        double next = std::sqrt(std::sqrt(nu));
        if (std::abs(next - sigma) <= 1e-11 * next) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

void check_divisible(int N, int L)
{
    if (L < 1 || L > 30 || N % (1 << L) != 0)
        throw Error(ErrorKind::LatticeTooSmall, "lattice size must be divisible by 2^layers", {{"N", N}, {"layers", L}});
}

// trapezoid sums at Q points for all r = 0..r_max: (1/Q) Σ_j f_j cos(k_j r) (or (cos - 1) when regulated)
std::vector<double> trapezoid(const Dispersion& d, Sector s, int r_max, int Q)
{
    std::vector<double> acc(r_max + 1, 0.0);
    // integrand is even: use k_j in [0, π], weights 1 at the ends and 2 inside
    for (int j = 0; j <= Q / 2; ++j) {
        double k = 2.0 * kPi * j / Q;
        double wj = (j == 0 || j == Q / 2) ? 1.0 : 2.0;
        double om = d(k);
        double f;
        if (s == Sector::p)
            f = om / 2.0;
        else
            f = om > 0.0 ? 1.0 / (2.0 * om) : 0.0;
        if (f == 0.0)
            continue;
        cplx rot = std::polar(1.0, k);
        cplx z = 1.0;
        for (int r = 0; r <= r_max; ++r) {
            if (r % 32 == 0)
                z = std::polar(1.0, k * r);
            double c = z.real();
            acc[r] += wj * f * (s == Sector::q_regulated ? c - 1.0 : c);
            z *= rot;
        }
    }
    for (double& a : acc)
        a /= Q;
    return acc;
}

} // namespace

std::string StackStrategy::describe() const
{
    return kind == Kind::redesign_each_layer ? "redesign_each_layer" : "fixed_after(" + std::to_string(l_star) + ")";
}

std::vector<FilterPair> LayerStack::pairs() const
{
    std::vector<FilterPair> out;
    for (const auto& l : layers)
        out.push_back(l.pair);
    return out;
}

std::vector<double> LayerStack::squeezes() const
{
    std::vector<double> out;
    for (const auto& l : layers)
        out.push_back(l.squeeze);
    return out;
}

double LayerStack::max_epsilon() const
{
    double m = 0.0;
    for (const auto& l : layers)
        m = std::max(m, l.epsilon);
    return m;
}

int LayerStack::support_length() const
{
    int m = 0;
    for (const auto& l : layers)
        m = std::max({m, l.pair.g_s.size(), l.pair.h_s.size()});
    return m;
}

LayerStack build_stack(const Dispersion& d, const DesignParams& params, int L_layers, StackStrategy strategy)
{
    if (L_layers < 1)
        throw std::invalid_argument("a stack needs at least one layer");
    LayerStack st;
    st.base = d;
    st.strategy = strategy;
    Dispersion cur = d;
    for (int l = 0; l < L_layers; ++l) {
        Layer layer;
        layer.omega = cur;
        layer.omega_pi = cur.at_pi();
        layer.squeeze = std::sqrt(layer.omega_pi);
        bool reuse = strategy.kind == StackStrategy::Kind::fixed_after && l > strategy.l_star;
        if (reuse) {
            const Layer& src = st.layers[strategy.l_star];
            layer.pair = src.pair;
            layer.designed_at = src.designed_at;
        } else {
            try {
                DesignResult r = design_pair(cur, params);
                layer.pair = r.pair;
                layer.report = r.report;
                layer.designed_at = l;
            } catch (const Error& e) {
                nlohmann::json det = e.details();
                det["layer"] = l;
                throw Error(e.kind(), std::string(e.what()) + " (layer " + std::to_string(l) + ")", det);
            }
        }
        layer.epsilon = epsilon_of(layer.pair, cur, params.grid_size);
        st.layers.push_back(std::move(layer));
        cur = cur.renormalized();
    }
    return st;
}

LayerStack stack_from_pair(const FilterPair& pair, const Dispersion& d, int L_layers)
{
    if (L_layers < 1)
        throw std::invalid_argument("a stack needs at least one layer");
    LayerStack st;
    st.base = d;
    st.strategy = StackStrategy::fixed_after(0);
    Dispersion cur = d;
    for (int l = 0; l < L_layers; ++l) {
        Layer layer;
        layer.pair = pair;
        layer.omega = cur;
        layer.omega_pi = cur.at_pi();
        layer.squeeze = std::sqrt(layer.omega_pi);
        layer.epsilon = epsilon_of(pair, cur);
        st.layers.push_back(std::move(layer));
        cur = cur.renormalized();
    }
    return st;
}

CovariancePair mera_covariance(const LayerStack& stack, int N)
{
    check_divisible(N, stack.size());
    auto sq = stack.squeezes();
    std::vector<double> inv(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        inv[i] = 1.0 / sq[i];
    auto pairs = stack.pairs();
    RowMatrix Rg = multi_layer_map(pairs, Channel::g, N, sq, false).map.m;
    RowMatrix Rh = multi_layer_map(pairs, Channel::h, N, inv, false).map.m;
    CovariancePair c;
    c.N = N;
    c.p = 0.5 * (Rg.transpose() * Rg);
    c.q = 0.5 * (Rh.transpose() * Rh);
    // symmetric by construction; make it exact
    c.p = 0.5 * (c.p + c.p.transpose()).eval();
    c.q = 0.5 * (c.q + c.q.transpose()).eval();
    return c;
}

bool is_gapless(const Dispersion& d) { return d(0.0) <= 1e-12 * d.at_pi(); }

CorrelationTable exact_correlations(const Dispersion& d, Sector s, int r_max, int quad_points)
{
    if (quad_points < (1 << 12) || quad_points % 2 != 0)
        throw std::invalid_argument("quad_points must be even and at least 4096");
    if (s == Sector::q && is_gapless(d))
        throw Error(ErrorKind::GaplessUnregulated, "plain q correlations diverge for a gapless dispersion",
                    {{"omega_0", d(0.0)}});
    auto t1 = trapezoid(d, s, r_max, quad_points);
    auto t2 = trapezoid(d, s, r_max, 2 * quad_points);
    CorrelationTable out;
    for (int r = 0; r <= r_max; ++r) {
        double rich = (4.0 * t2[r] - t1[r]) / 3.0;
        out.value.push_back(rich);
        out.certificate.push_back(std::abs(rich - t2[r]));
    }
    return out;
}

CovariancePair exact_covariance(const Dispersion& d, int N, int quad_points, QBlock mode)
{
    if (N < 2)
        throw std::invalid_argument("lattice needs at least two sites");
    bool gapless = is_gapless(d);
    if (mode == QBlock::plain && gapless)
        throw Error(ErrorKind::GaplessUnregulated, "plain q block requested for a gapless dispersion",
                    {{"omega_0", d(0.0)}});
    bool reg = mode == QBlock::regulated || (mode == QBlock::automatic && gapless);
    int r_max = N / 2;
    auto tp = exact_correlations(d, Sector::p, r_max, quad_points);
    auto tq = exact_correlations(d, reg ? Sector::q_regulated : Sector::q, r_max, quad_points);
    CovariancePair c;
    c.N = N;
    c.regulated = reg;
    c.p.resize(N, N);
    c.q.resize(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            int r = ring_distance(n, m, N);
            c.p(n, m) = tp.value[r];
            c.q(n, m) = tq.value[r];
        }
    for (int r = 0; r <= r_max; ++r)
        c.quad_certificate = std::max({c.quad_certificate, tp.certificate[r], tq.certificate[r]});
    return c;
}

CovariancePair ring_covariance(const Dispersion& d, int N)
{
    std::vector<double> wp(N / 2 + 1, 0.0), wq(N / 2 + 1, 0.0);
    for (int j = 0; j < N; ++j) {
        double k = 2.0 * kPi * j / N;
        double om = d(k);
        if (!(om > 0.0))
            throw Error(ErrorKind::GaplessUnregulated, "ring ground state has a zero mode", {{"k", k}});
        for (int r = 0; r <= N / 2; ++r) {
            double c = std::cos(k * r);
            wp[r] += om / 2.0 * c / N;
            wq[r] += c / (2.0 * om) / N;
        }
    }
    CovariancePair c;
    c.N = N;
    c.p.resize(N, N);
    c.q.resize(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            int r = ring_distance(n, m, N);
            c.p(n, m) = wp[r];
            c.q(n, m) = wq[r];
        }
    return c;
}

double q_norm(const Dispersion& d, int r, int quad_points)
{
    // midpoint rule avoids k = 0 where the r = 0 integrand may blow up
    if (r == 0 && is_gapless(d))
        return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (int j = 0; j < quad_points; ++j) {
        double k = -kPi + 2.0 * kPi * (j + 0.5) / quad_points;
        double om = d(k);
        double num = r == 0 ? 1.0 : 2.0 - 2.0 * std::cos(k * r);
        acc += num / (4.0 * om * om);
    }
    return std::sqrt(acc / quad_points);
}

double uncertainty_min(const CovariancePair& c)
{
    if (c.regulated)
        throw Error(ErrorKind::GaplessUnregulated, "uncertainty check needs the plain q block", {});
    Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd(c.q));
    if (llt.info() != Eigen::Success)
        return -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd S = L.transpose() * Eigen::MatrixXd(c.p) * L;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

TheoremBound theorem_bound(double B, double D, double M, double Omega, double eps, int L_layers)
{
    nlohmann::json det = {{"B", B}, {"D", D}, {"M", M}, {"Omega", Omega}, {"epsilon", eps}, {"L_layers", L_layers}};
    if (!(eps > 0.0 && eps <= 1.0))
        throw Error(ErrorKind::OutOfHypothesis, "epsilon must lie in (0, 1]", det);
    if (!(D >= 1.0))
        throw Error(ErrorKind::OutOfHypothesis, "D must be at least 1", det);
    if (!(Omega >= 1.0))
        throw Error(ErrorKind::OutOfHypothesis, "Omega must be at least 1", det);
    double C = 4.0 * B * B * std::pow(M, 1.5) * Omega;
    det["C"] = C;
    if (!(C / eps >= 2.0))
        throw Error(ErrorKind::OutOfHypothesis, "C / epsilon must be at least 2", det);
    TheoremBound t;
    t.C = C;
    t.bound_p = D * D * (C * std::pow(2.0, -L_layers / 2.0) + 3.0 * eps * D * std::log2(C / eps));
    t.bound_q_prefactor = 2.0 * t.bound_p;
    return t;
}

double substack_norm_bound(const std::vector<FilterPair>& pairs, int N)
{
    int L = static_cast<int>(pairs.size());
    check_divisible(N, L);
    double D = 0.0;
    for (int from = 0; from < L; ++from)
        for (int to = from; to < L; ++to)
            for (Channel c : {Channel::g, Channel::h})
                D = std::max(D, substack_norm(pairs, from, to, c, N >> from));
    return D;
}

double scaling_sup_bound(const LayerStack& stack, int J)
{
    auto pairs = stack.pairs();
    bool constant = true;
    for (const auto& p : pairs)
        constant = constant && FirFilter::max_diff(p.g_s, pairs.front().g_s) == 0.0 &&
                   FirFilter::max_diff(p.h_s, pairs.front().h_s) == 0.0;
    if (constant)
        return std::max(cascade(pairs.front().g_s, J).sup_norm(), cascade(pairs.front().h_s, J).sup_norm());
    AdaptiveFamily fam = adaptive_family(pairs, stack.size(), J);
    double B = 0.0;
    for (const auto& lev : fam.levels)
        B = std::max({B, lev.phi_g.sup_norm(), lev.phi_h.sup_norm()});
    return B;
}

ErrorReport error_report(const LayerStack& stack, int N, int quad_points, const ErrorOptions& opt)
{
    int L = stack.size();
    check_divisible(N, L);
    const Dispersion& d = stack.base;
    bool gapless = is_gapless(d);

    // bulk window |n| <= N/4 on the ring
    int w = N / 4;
    std::vector<int> idx;
    for (int n = -w; n <= w; ++n)
        idx.push_back(wrap(n, N));
    int nw = static_cast<int>(idx.size());

    auto sq = stack.squeezes();
    std::vector<double> inv(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        inv[i] = 1.0 / sq[i];
    auto pairs = stack.pairs();
    RowMatrix Rg = multi_layer_map(pairs, Channel::g, N, sq, false).map.m;
    RowMatrix Rh = multi_layer_map(pairs, Channel::h, N, inv, false).map.m;
    Eigen::MatrixXd Wg(N, nw), Wh(N, nw);
    for (int i = 0; i < nw; ++i) {
        Wg.col(i) = Rg.col(idx[i]);
        Wh.col(i) = Rh.col(idx[i]);
    }
    Rg.resize(0, 0);
    Rh.resize(0, 0);
    Eigen::MatrixXd P = 0.5 * (Wg.transpose() * Wg);
    Eigen::MatrixXd Q = 0.5 * (Wh.transpose() * Wh);

    int r_max = 2 * w;
    auto tp = exact_correlations(d, Sector::p, r_max, quad_points);
    auto tqr = exact_correlations(d, Sector::q_regulated, r_max, quad_points);
    std::optional<CorrelationTable> tq;
    if (!gapless)
        tq = exact_correlations(d, Sector::q, r_max, quad_points);

    ErrorReport rep;
    rep.N = N;
    rep.omega_pi = d.at_pi();
    // certificate over the entries the report actually uses
    for (int r = 0; r <= r_max; ++r) {
        rep.quad_certificate = std::max(rep.quad_certificate, tp.certificate[r]);
        if (tq)
            rep.quad_certificate = std::max(rep.quad_certificate, tq->certificate[r]);
    }
    for (int s : opt.separations)
        if (s > 0 && s <= r_max)
            rep.quad_certificate = std::max(rep.quad_certificate, tqr.certificate[s]);
    double dq = 0.0;
    for (int i = 0; i < nw; ++i)
        for (int j = 0; j < nw; ++j) {
            int r = std::abs(i - j);
            rep.delta_p = std::max(rep.delta_p, std::abs(tp.value[r] - P(i, j)));
            if (tq)
                dq = std::max(dq, std::abs(tq->value[r] - Q(i, j)));
        }
    if (tq)
        rep.delta_q = dq;

    // constants
    BoundConstants& k = rep.constants;
    k.L_layers = L;
    k.epsilon = std::max(stack.max_epsilon(), 1e-300);
    k.M = stack.support_length();
    k.B = scaling_sup_bound(stack, opt.cascade_level);
    k.D = std::max(1.0, substack_norm_bound(pairs, N));
    double Om = 0.0;
    for (const auto& layer : stack.layers)
        for (double kk : k_grid(opt.grid))
            Om = std::max(Om, layer.omega(kk) / layer.omega_pi);
    Dispersion last = stack.layers.back().omega.renormalized();
    for (double kk : k_grid(opt.grid))
        Om = std::max(Om, last(kk) / last.at_pi());
    k.Omega = std::max(1.0, Om);
    TheoremBound tb = theorem_bound(k.B, k.D, k.M, k.Omega, k.epsilon, L);
    k.C = tb.C;
    rep.bound_p = rep.omega_pi * tb.bound_p;
    if (!gapless)
        rep.bound_q = tb.bound_q_prefactor * q_norm(d, 0, quad_points);

    int center = w; // window position of site 0
    for (int s : opt.separations) {
        if (s <= 0 || s > 2 * w)
            continue;
        SeparationError e;
        for (int i = 0; i + s < nw; ++i) {
            // γ̃_{nm} = γ_{nm} - γ_{nn}, both orderings
            double a = Q(i, i + s) - Q(i, i);
            double b = Q(i + s, i) - Q(i + s, i + s);
            e.measured = std::max({e.measured, std::abs(tqr.value[s] - a), std::abs(tqr.value[s] - b)});
        }
        e.q_norm = q_norm(d, s, quad_points);
        e.bound = tb.bound_q_prefactor * e.q_norm;
        rep.delta_q_regulated[s] = e;
    }
    for (int m = 0; m <= w; ++m) {
        CorrelationRow row;
        row.n = 0;
        row.m = m;
        row.exact_p = tp.value[m];
        row.mera_p = P(center, center + m);
        row.exact_q_reg = tqr.value[m];
        row.mera_q_reg = Q(center, center + m) - Q(center, center);
        rep.rows.push_back(row);
    }
    return rep;
}

namespace {

// R_g q R_gᵀ and R_h p R_hᵀ for one layer; returns the wavelet-block deviation from I/2 and
// replaces q, p by the scaling blocks
double push_layer(const Layer& layer, Eigen::MatrixXd& q, Eigen::MatrixXd& p)
{
    int n = static_cast<int>(q.rows());
    Eigen::MatrixXd Wg = decomposition_map(layer.pair, Channel::g, n).m * layer.squeeze;
    Eigen::MatrixXd Wh = decomposition_map(layer.pair, Channel::h, n).m / layer.squeeze;
    Eigen::MatrixXd q2 = Wg * q * Wg.transpose();
    Eigen::MatrixXd p2 = Wh * p * Wh.transpose();
    int h = n / 2;
    Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(h, h);
    double dev = std::max((q2.bottomRightCorner(h, h) - half).cwiseAbs().maxCoeff(),
                          (p2.bottomRightCorner(h, h) - half).cwiseAbs().maxCoeff());
    q = q2.topLeftCorner(h, h);
    p = p2.topLeftCorner(h, h);
    return dev;
}

} // namespace

std::vector<double> wavelet_channel_deviation(const LayerStack& stack, int N)
{
    check_divisible(N, stack.size());
    CovariancePair c = ring_covariance(stack.base, N);
    Eigen::MatrixXd q = c.q, p = c.p;
    std::vector<double> out;
    for (const auto& layer : stack.layers)
        out.push_back(push_layer(layer, q, p));
    return out;
}

std::vector<double> layer_disentangling_deviation(const LayerStack& stack, int N)
{
    check_divisible(N, stack.size());
    std::vector<double> out;
    int n = N;
    for (const auto& layer : stack.layers) {
        CovariancePair c = ring_covariance(layer.omega, n);
        Eigen::MatrixXd q = c.q, p = c.p;
        out.push_back(push_layer(layer, q, p));
        n /= 2;
    }
    return out;
}

} // namespace wavemera

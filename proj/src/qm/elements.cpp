#include "qm/elements.hpp"

#include "qm/basis.hpp"

#include <stdexcept>

namespace colhel::qm {

LogIntegrals::LogIntegrals(int max_power) {
    lnfact_.resize(max_power + 1);
    lnfact_[0] = 0.0;
    for (int k = 1; k <= max_power; ++k)
        lnfact_[k] = lnfact_[k - 1] + std::log(static_cast<double>(k));
}

double log_add_signed(double lx, double ly, double s) {
    if (ly > lx)
        return log_add_signed(ly, lx, s); // symmetric for s = +1; s = -1 callers keep lx >= ly
    return lx + std::log1p(s * std::exp(ly - lx));
}

Complex scaling_parameter(const BasisSpec& spec) {
    return std::polar(spec.a_mod, -spec.theta);
}

std::vector<std::pair<int, int>> basis_pairs(Family family, int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("basis requires n_max >= 1");
    std::vector<std::pair<int, int>> pairs;
    switch (family) {
    case Family::eZe_symmetric:
        for (int n = 1; n <= n_max; ++n)
            for (int m = n; m <= n_max; ++m)
                pairs.emplace_back(n, m);
        break;
    case Family::eZe_antisymmetric:
        if (n_max < 2)
            throw std::invalid_argument("antisymmetric basis requires n_max >= 2");
        for (int n = 1; n <= n_max; ++n)
            for (int m = n + 1; m <= n_max; ++m)
                pairs.emplace_back(n, m);
        break;
    case Family::Zee_singlet:
        for (int n = 1; n <= n_max; ++n)
            for (int m = 1; m <= n_max; ++m)
                pairs.emplace_back(n, m);
        break;
    }
    return pairs;
}

namespace {

// d/dr (a r)^n e^{-a r} = a [ n g_{n-1} - g_n ]: the derivative quadratic
// forms expand into the lo() table with small integer coefficients.
void add_tt(TermSum& acc, const LogIntegrals& li, double coef, int i, int j) {
    if (i > 0 && j > 0)
        acc.add(coef * i * j, li.lo(i - 1, j - 1));
    if (i > 0)
        acc.add(-coef * i, li.lo(i - 1, j));
    if (j > 0)
        acc.add(-coef * j, li.lo(i, j - 1));
    acc.add(coef, li.lo(i, j));
}

void add_cc(TermSum& acc, const LogIntegrals& li, double coef, int i, int j) {
    if (i > 0)
        acc.add(coef * i, li.lo(i - 1, j));
    acc.add(-coef, li.lo(i, j));
}

} // namespace

RealTables build_tables(Family family, int n_max, bool electron_repulsion) {
    RealTables t;
    t.pairs = basis_pairs(family, n_max);
    const int dim = static_cast<int>(t.pairs.size());
    const LogIntegrals li(4 * n_max + 8);
    const double exch = family == Family::eZe_antisymmetric ? -1.0 : 1.0;
    const bool zee = family == Family::Zee_singlet;
    const double ln2 = 0.69314718055994530941723212146;

    t.log_norm.resize(dim);
    for (int mu = 0; mu < dim; ++mu) {
        auto [n, m] = t.pairs[mu];
        if (zee) {
            t.log_norm[mu] = li.lo(n, n) + li.lo(m, m);
        } else {
            // <phi|phi> = 2 [ o(n,n) o(m,m) +- o(n,m)^2 ]
            t.log_norm[mu] = ln2 + log_add_signed(li.lo(n, n) + li.lo(m, m),
                                                  2.0 * li.lo(n, m), exch);
        }
    }

    t.S.resize(dim, dim);
    t.T.resize(dim, dim);
    t.V.resize(dim, dim);

    for (int mu = 0; mu < dim; ++mu) {
        auto [n, m] = t.pairs[mu];
        for (int nu = mu; nu < dim; ++nu) {
            auto [np, mp] = t.pairs[nu];
            const double off = -0.5 * (t.log_norm[mu] + t.log_norm[nu]);
            TermSum s{off}, tk{off}, v{off};

            const auto fold_tt = [&](double coef, int i, int j, double partner_log) {
                if (i > 0 && j > 0)
                    tk.add(coef * i * j, li.lo(i - 1, j - 1) + partner_log);
                if (i > 0)
                    tk.add(-coef * i, li.lo(i - 1, j) + partner_log);
                if (j > 0)
                    tk.add(-coef * j, li.lo(i, j - 1) + partner_log);
                tk.add(coef, li.lo(i, j) + partner_log);
            };

            if (zee) {
                s.add(1.0, li.lo(n, np) + li.lo(m, mp));
                // kinetic quadratic form in the wedge coordinates u = r_<,
                // w = r_> - r_<:  (1/2) du.du + dw.dw - (du.dw + dw.du)/2
                fold_tt(0.5, n, np, li.lo(m, mp));
                fold_tt(1.0, m, mp, li.lo(n, np));
                const auto fold_cc = [&](double coef, int i, int j, int k, int l) {
                    const auto cc_terms = [&](int p, int q, auto&& emit) {
                        if (p > 0)
                            emit(static_cast<double>(p), li.lo(p - 1, q));
                        emit(-1.0, li.lo(p, q));
                    };
                    cc_terms(i, j, [&](double c1, double l1) {
                        cc_terms(k, l, [&](double c2, double l2) { tk.add(coef * c1 * c2, l1 + l2); });
                    });
                };
                fold_cc(-0.5, n, np, mp, m);
                fold_cc(-0.5, np, n, m, mp);

                v.add(-2.0, li.lo1(n, np) + li.lo(m, mp)); // -2/r_<
                v.add(-2.0, li.ljj(n + np, m + mp));       // -2/r_>
                if (electron_repulsion)
                    v.add(1.0, li.lo(n, np) + li.lo1(m, mp)); // +1/(r_> - r_<)
            } else {
                // direct + exchange pairing of the symmetrized products
                const int alpha[2] = {np, mp}, beta[2] = {mp, np};
                const double ln2off = ln2; // overall factor 2
                for (int x = 0; x < 2; ++x) {
                    const double sgn = x == 0 ? 1.0 : exch;
                    const int ap = alpha[x], bp = beta[x];
                    s.add(2.0 * sgn, li.lo(n, ap) + li.lo(m, bp));
                    fold_tt(0.5 * sgn, n, ap, li.lo(m, bp) + ln2off); // 2 * (1/2) * tt * o
                    fold_tt(0.5 * sgn, m, bp, li.lo(n, ap) + ln2off);

                    v.add(-4.0 * sgn, li.lo1(n, ap) + li.lo(m, bp)); // 2 * (-2/r1)
                    v.add(-4.0 * sgn, li.lo(n, ap) + li.lo1(m, bp)); // 2 * (-2/r2)
                    if (electron_repulsion)
                        v.add(2.0 * sgn, li.ljj(n + ap, m + bp)); // 2 * 1/(r1+r2)
                }
            }

            t.S(mu, nu) = t.S(nu, mu) = s.value;
            t.T(mu, nu) = t.T(nu, mu) = tk.value;
            t.V(mu, nu) = t.V(nu, mu) = v.value;
        }
    }
    return t;
}

ComplexSymmetricPair assemble(const RealTables& tables, Complex a) {
    ComplexSymmetricPair pair;
    pair.S = tables.S.cast<Complex>();
    pair.H = (a * a) * tables.T.cast<Complex>() + a * tables.V.cast<Complex>();
    return pair;
}

ComplexSymmetricPair matrix_elements(const BasisSpec& spec) {
    const RealTables tables = build_tables(spec.family, spec.n_max, spec.electron_repulsion);
    return assemble(tables, scaling_parameter(spec));
}

RealTables build_one_electron_tables(int n_max, double charge) {
    RealTables t;
    t.pairs.reserve(n_max);
    for (int n = 1; n <= n_max; ++n)
        t.pairs.emplace_back(n, 0);
    const int dim = n_max;
    const LogIntegrals li(2 * n_max + 4);

    t.log_norm.resize(dim);
    for (int i = 0; i < dim; ++i)
        t.log_norm[i] = li.lo(i + 1, i + 1);

    t.S.resize(dim, dim);
    t.T.resize(dim, dim);
    t.V.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const int n = i + 1, np = j + 1;
            const double off = -0.5 * (t.log_norm[i] + t.log_norm[j]);
            TermSum s{off}, tk{off}, v{off};
            s.add(1.0, li.lo(n, np));
            add_tt(tk, li, 0.5, n, np);
            v.add(-charge, li.lo1(n, np));
            t.S(i, j) = t.S(j, i) = s.value;
            t.T(i, j) = t.T(j, i) = tk.value;
            t.V(i, j) = t.V(j, i) = v.value;
        }
    }
    return t;
}

} // namespace colhel::qm

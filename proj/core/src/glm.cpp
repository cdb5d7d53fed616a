#include "patnet/glm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "patnet/csv.hpp"
#include "patnet/dist.hpp"
#include "patnet/parallel.hpp"

namespace patnet {

GlmTerm GlmTerm::cont(std::string col) {
    GlmTerm t;
    t.kind = Kind::continuous;
    t.column = std::move(col);
    return t;
}

GlmTerm GlmTerm::fe(std::string col, std::optional<std::string> ref) {
    GlmTerm t;
    t.kind = Kind::fixed_effect;
    t.column = std::move(col);
    t.reference = std::move(ref);
    return t;
}

GlmTerm GlmTerm::inter(std::string a, std::string b) {
    GlmTerm t;
    t.kind = Kind::interaction;
    t.column = std::move(a);
    t.column2 = std::move(b);
    return t;
}

std::optional<double> GlmFit::coefficient(const std::string& term) const {
    for (std::size_t i = 0; i < term_names.size(); ++i)
        if (term_names[i] == term) return coefficients[i];
    return std::nullopt;
}

namespace {

// Sparse per-row design: each generator appends (column_index, value) pairs.
struct Design {
    std::vector<std::string> names;  // full design, intercept first
    // level index per row for each categorical column used
    struct FactorCodes {
        std::vector<std::string> levels;   // sorted
        std::size_t reference = 0;         // index into levels
        std::vector<std::uint32_t> codes;  // per row
    };
    std::map<std::string, FactorCodes> factors;

    struct Piece {
        enum class Kind { intercept, numeric, dummy, product_nn, product_nf, product_ff };
        Kind kind;
        std::span<const double> x1, x2;         // numeric sources
        const FactorCodes* f1 = nullptr;         // categorical sources
        const FactorCodes* f2 = nullptr;
        std::size_t first_col = 0;               // design column of first output
        std::size_t width = 1;
    };
    std::vector<Piece> pieces;

    std::size_t n_cols() const { return names.size(); }

    // Appends this row's nonzero entries to out as (col, value).
    void row(std::size_t i, std::vector<std::pair<std::size_t, double>>& out) const {
        out.clear();
        for (const Piece& p : pieces) {
            switch (p.kind) {
                case Piece::Kind::intercept:
                    out.emplace_back(p.first_col, 1.0);
                    break;
                case Piece::Kind::numeric:
                    if (p.x1[i] != 0.0) out.emplace_back(p.first_col, p.x1[i]);
                    break;
                case Piece::Kind::dummy: {
                    const std::uint32_t c = p.f1->codes[i];
                    if (c != p.f1->reference) {
                        const std::size_t pos = c < p.f1->reference ? c : c - 1;
                        out.emplace_back(p.first_col + pos, 1.0);
                    }
                    break;
                }
                case Piece::Kind::product_nn: {
                    const double v = p.x1[i] * p.x2[i];
                    if (v != 0.0) out.emplace_back(p.first_col, v);
                    break;
                }
                case Piece::Kind::product_nf: {
                    const std::uint32_t c = p.f1->codes[i];
                    if (c != p.f1->reference && p.x1[i] != 0.0) {
                        const std::size_t pos = c < p.f1->reference ? c : c - 1;
                        out.emplace_back(p.first_col + pos, p.x1[i]);
                    }
                    break;
                }
                case Piece::Kind::product_ff: {
                    const std::uint32_t c1 = p.f1->codes[i];
                    const std::uint32_t c2 = p.f2->codes[i];
                    if (c1 != p.f1->reference && c2 != p.f2->reference) {
                        const std::size_t n2 = p.f2->levels.size() - 1;
                        const std::size_t pos1 = c1 < p.f1->reference ? c1 : c1 - 1;
                        const std::size_t pos2 = c2 < p.f2->reference ? c2 : c2 - 1;
                        out.emplace_back(p.first_col + pos1 * n2 + pos2, 1.0);
                    }
                    break;
                }
            }
        }
    }
};

Design::FactorCodes encode_factor(const DataTable& data, const std::string& col,
                                  const std::optional<std::string>& reference) {
    Design::FactorCodes fc;
    fc.levels = data.levels(col);
    if (fc.levels.size() < 2)
        throw std::invalid_argument("fit_glm: fixed effect " + col + " has fewer than 2 levels");
    if (reference) {
        auto it = std::find(fc.levels.begin(), fc.levels.end(), *reference);
        if (it == fc.levels.end())
            throw std::invalid_argument("fit_glm: reference level " + *reference +
                                        " not found in " + col);
        fc.reference = static_cast<std::size_t>(it - fc.levels.begin());
    }
    auto values = data.categorical(col);
    fc.codes.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto it = std::lower_bound(fc.levels.begin(), fc.levels.end(), values[i]);
        fc.codes[i] = static_cast<std::uint32_t>(it - fc.levels.begin());
    }
    return fc;
}

Design build_design(const GlmSpec& spec, const DataTable& data) {
    Design d;
    d.names.push_back("(intercept)");
    {
        Design::Piece p;
        p.kind = Design::Piece::Kind::intercept;
        p.first_col = 0;
        d.pieces.push_back(p);
    }

    auto term_kind = [&](const std::string& col) -> std::optional<GlmTerm::Kind> {
        for (const auto& t : spec.terms)
            if (t.kind != GlmTerm::Kind::interaction && t.column == col) return t.kind;
        return std::nullopt;
    };

    auto factor_for = [&](const std::string& col) -> const Design::FactorCodes* {
        auto it = d.factors.find(col);
        if (it != d.factors.end()) return &it->second;
        std::optional<std::string> ref;
        for (const auto& t : spec.terms)
            if (t.kind == GlmTerm::Kind::fixed_effect && t.column == col) ref = t.reference;
        auto [it2, ok] = d.factors.emplace(col, encode_factor(data, col, ref));
        return &it2->second;
    };

    for (const auto& term : spec.terms) {
        switch (term.kind) {
            case GlmTerm::Kind::continuous: {
                Design::Piece p;
                p.kind = Design::Piece::Kind::numeric;
                p.x1 = data.numeric(term.column);
                p.first_col = d.names.size();
                d.names.push_back(term.column);
                d.pieces.push_back(p);
                break;
            }
            case GlmTerm::Kind::fixed_effect: {
                const auto* fc = factor_for(term.column);
                Design::Piece p;
                p.kind = Design::Piece::Kind::dummy;
                p.f1 = fc;
                p.first_col = d.names.size();
                p.width = fc->levels.size() - 1;
                for (std::size_t l = 0; l < fc->levels.size(); ++l)
                    if (l != fc->reference)
                        d.names.push_back(term.column + "=" + fc->levels[l]);
                d.pieces.push_back(p);
                break;
            }
            case GlmTerm::Kind::interaction: {
                const auto k1 = term_kind(term.column);
                const auto k2 = term_kind(term.column2);
                if (!k1 || !k2)
                    throw std::invalid_argument(
                        "fit_glm: interaction references undeclared term: " + term.column +
                        " x " + term.column2);
                const bool n1 = *k1 == GlmTerm::Kind::continuous;
                const bool n2 = *k2 == GlmTerm::Kind::continuous;
                Design::Piece p;
                if (n1 && n2) {
                    p.kind = Design::Piece::Kind::product_nn;
                    p.x1 = data.numeric(term.column);
                    p.x2 = data.numeric(term.column2);
                    p.first_col = d.names.size();
                    d.names.push_back(term.column + ":" + term.column2);
                } else if (n1 != n2) {
                    const std::string& num_col = n1 ? term.column : term.column2;
                    const std::string& fac_col = n1 ? term.column2 : term.column;
                    p.kind = Design::Piece::Kind::product_nf;
                    p.x1 = data.numeric(num_col);
                    p.f1 = factor_for(fac_col);
                    p.first_col = d.names.size();
                    p.width = p.f1->levels.size() - 1;
                    for (std::size_t l = 0; l < p.f1->levels.size(); ++l)
                        if (l != p.f1->reference)
                            d.names.push_back(num_col + ":" + fac_col + "=" + p.f1->levels[l]);
                } else {
                    p.kind = Design::Piece::Kind::product_ff;
                    p.f1 = factor_for(term.column);
                    p.f2 = factor_for(term.column2);
                    p.first_col = d.names.size();
                    p.width = (p.f1->levels.size() - 1) * (p.f2->levels.size() - 1);
                    for (std::size_t l1 = 0; l1 < p.f1->levels.size(); ++l1) {
                        if (l1 == p.f1->reference) continue;
                        for (std::size_t l2 = 0; l2 < p.f2->levels.size(); ++l2) {
                            if (l2 == p.f2->reference) continue;
                            d.names.push_back(term.column + "=" + p.f1->levels[l1] + ":" +
                                              term.column2 + "=" + p.f2->levels[l2]);
                        }
                    }
                }
                d.pieces.push_back(p);
                break;
            }
        }
    }
    return d;
}

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Accumulates Gram = sum w_i x_i x_i' and rhs = sum x_i r_i over sparse rows.
// Chunk partials are reduced in chunk order, so results do not depend on the
// thread count.
struct Accumulated {
    Matrix gram;
    Vector rhs;
};

Accumulated accumulate(const Design& design, std::size_t n,
                       const std::function<void(std::size_t, double&, double&)>& weight_resid,
                       unsigned threads) {
    const std::size_t k = design.n_cols();
    constexpr std::size_t kChunk = 8192;
    const std::size_t n_chunks = chunk_count(n, kChunk);
    std::vector<Accumulated> partial(n_chunks);

    for_each_chunk(n, kChunk, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        Accumulated acc;
        acc.gram = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        acc.rhs = Vector::Zero(static_cast<Eigen::Index>(k));
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t i = begin; i < end; ++i) {
            design.row(i, row);
            double w = 1.0, r = 0.0;
            weight_resid(i, w, r);
            for (const auto& [c1, v1] : row) {
                acc.rhs[static_cast<Eigen::Index>(c1)] += v1 * r;
                for (const auto& [c2, v2] : row)
                    acc.gram(static_cast<Eigen::Index>(c1), static_cast<Eigen::Index>(c2)) +=
                        w * v1 * v2;
            }
        }
        partial[c] = std::move(acc);
    });

    Accumulated total;
    total.gram = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    total.rhs = Vector::Zero(static_cast<Eigen::Index>(k));
    for (const auto& p : partial) {
        total.gram += p.gram;
        total.rhs += p.rhs;
    }
    return total;
}

double sparse_dot(const std::vector<std::pair<std::size_t, double>>& row, const Vector& beta) {
    double eta = 0.0;
    for (const auto& [c, v] : row) eta += v * beta[static_cast<Eigen::Index>(c)];
    return eta;
}

// Solves gram * x = rhs on the kept columns; dense Cholesky up to 2000
// columns, Jacobi-preconditioned conjugate gradient above.
Vector solve_normal(const Matrix& gram, const Vector& rhs) {
    if (gram.rows() <= 2000) return gram.ldlt().solve(rhs);
    Vector x = Vector::Zero(gram.rows());
    Vector r = rhs;
    Vector inv_diag = gram.diagonal().cwiseMax(1e-12).cwiseInverse();
    Vector z = inv_diag.cwiseProduct(r);
    Vector p = z;
    double rz = r.dot(z);
    const double tol2 = 1e-24 * rhs.squaredNorm();
    for (int it = 0; it < 10000 && r.squaredNorm() > tol2; ++it) {
        Vector ap = gram * p;
        const double alpha = rz / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        z = inv_diag.cwiseProduct(r);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    return x;
}

}  // namespace

GlmFit fit_glm(const GlmSpec& spec, const DataTable& data, unsigned threads) {
    if (data.n_rows() == 0) throw std::invalid_argument("fit_glm: empty data");
    const auto y = data.numeric(spec.response);
    const std::size_t n = y.size();

    if (spec.family == GlmSpec::Family::logistic) {
        bool saw0 = false, saw1 = false;
        for (double v : y) {
            if (v == 0.0)
                saw0 = true;
            else if (v == 1.0)
                saw1 = true;
            else
                throw std::invalid_argument("fit_glm: logistic response must be 0/1");
        }
        if (!saw0 || !saw1)
            throw std::invalid_argument("fit_glm: response has zero variance");
    } else {
        const double first = y.empty() ? 0.0 : y[0];
        bool varies = false;
        for (double v : y)
            if (v != first) { varies = true; break; }
        if (!varies) throw std::invalid_argument("fit_glm: response has zero variance");
    }

    const Design full_design = build_design(spec, data);

    // Rank screen on the unweighted Gram: non-pivot columns are dropped for
    // the whole fit and reported.
    auto unit = [](std::size_t, double& w, double& r) { w = 1.0; r = 0.0; };
    Accumulated screen = accumulate(full_design, n, unit, threads);
    Eigen::ColPivHouseholderQR<Matrix> qr(screen.gram);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();

    GlmFit fit;
    fit.spec = spec;
    fit.n_obs = n;

    std::vector<std::size_t> kept;
    if (rank < screen.gram.rows()) {
        const auto& perm = qr.colsPermutation().indices();
        std::vector<bool> keep(full_design.n_cols(), false);
        for (Eigen::Index i = 0; i < rank; ++i) keep[static_cast<std::size_t>(perm[i])] = true;
        for (std::size_t c = 0; c < full_design.n_cols(); ++c) {
            if (keep[c])
                kept.push_back(c);
            else
                fit.dropped_columns.push_back(full_design.names[c]);
        }
    } else {
        kept.resize(full_design.n_cols());
        for (std::size_t c = 0; c < kept.size(); ++c) kept[c] = c;
    }

    // Remap sparse rows onto kept columns.
    std::vector<std::ptrdiff_t> col_map(full_design.n_cols(), -1);
    for (std::size_t j = 0; j < kept.size(); ++j) col_map[kept[j]] = static_cast<std::ptrdiff_t>(j);
    const std::size_t k = kept.size();
    for (const std::size_t c : kept) fit.term_names.push_back(full_design.names[c]);

    // Per-row design access with dropped columns remapped away.
    auto mapped_row = [&](std::size_t i, std::vector<std::pair<std::size_t, double>>& out) {
        static thread_local std::vector<std::pair<std::size_t, double>> scratch;
        full_design.row(i, scratch);
        out.clear();
        for (const auto& [c, v] : scratch) {
            const std::ptrdiff_t m = col_map[c];
            if (m >= 0) out.emplace_back(static_cast<std::size_t>(m), v);
        }
    };

    auto accumulate_mapped =
        [&](const std::function<void(std::size_t, double&, double&)>& weight_resid) {
            constexpr std::size_t kChunk = 8192;
            const std::size_t n_chunks = chunk_count(n, kChunk);
            std::vector<Accumulated> partial(n_chunks);
            for_each_chunk(n, kChunk, threads,
                           [&](std::size_t c, std::size_t begin, std::size_t end) {
                               Accumulated acc;
                               acc.gram = Matrix::Zero(static_cast<Eigen::Index>(k),
                                                       static_cast<Eigen::Index>(k));
                               acc.rhs = Vector::Zero(static_cast<Eigen::Index>(k));
                               std::vector<std::pair<std::size_t, double>> row;
                               for (std::size_t i = begin; i < end; ++i) {
                                   mapped_row(i, row);
                                   double w = 1.0, r = 0.0;
                                   weight_resid(i, w, r);
                                   for (const auto& [c1, v1] : row) {
                                       acc.rhs[static_cast<Eigen::Index>(c1)] += v1 * r;
                                       for (const auto& [c2, v2] : row)
                                           acc.gram(static_cast<Eigen::Index>(c1),
                                                    static_cast<Eigen::Index>(c2)) += w * v1 * v2;
                                   }
                               }
                               partial[c] = std::move(acc);
                           });
            Accumulated total;
            total.gram = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
            total.rhs = Vector::Zero(static_cast<Eigen::Index>(k));
            for (const auto& p : partial) {
                total.gram += p.gram;
                total.rhs += p.rhs;
            }
            return total;
        };

    // Mapped deviance/eta helpers.
    std::vector<double> eta(n, 0.0);
    auto compute_eta = [&](const Vector& beta) {
        for_each_chunk(n, 8192, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
            std::vector<std::pair<std::size_t, double>> row;
            for (std::size_t i = begin; i < end; ++i) {
                mapped_row(i, row);
                eta[i] = sparse_dot(row, beta);
            }
        });
    };
    auto deviance_at = [&](const Vector& beta) {
        compute_eta(beta);
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = eta[i];
            const double log1pe = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
            dev += 2.0 * (log1pe - y[i] * e);
        }
        return dev;
    };

    Vector beta = Vector::Zero(static_cast<Eigen::Index>(k));

    if (spec.family == GlmSpec::Family::linear) {
        auto resid_y = [&](std::size_t i, double& w, double& r) { w = 1.0; r = y[i]; };
        Accumulated acc = accumulate_mapped(resid_y);
        beta = solve_normal(acc.gram, acc.rhs);
        compute_eta(beta);
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - eta[i];
            rss += e * e;
        }
        fit.deviance = rss;
        fit.deviance_trace.push_back(rss);
        fit.iterations = 1;
        fit.converged = true;

        const double dof = static_cast<double>(n) - static_cast<double>(k);
        const double sigma2 = dof > 0 ? rss / dof : 0.0;
        Matrix cov = sigma2 * acc.gram.ldlt().solve(Matrix::Identity(
                                  static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
        fit.se.resize(k);
        for (std::size_t j = 0; j < k; ++j)
            fit.se[j] = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(j),
                                                    static_cast<Eigen::Index>(j))));
    } else {
        double dev = deviance_at(beta);
        fit.deviance_trace.push_back(dev);
        std::vector<double> mu(n, 0.5);
        Matrix final_gram;

        for (int iter = 0; iter < spec.max_iterations; ++iter) {
            for (std::size_t i = 0; i < n; ++i) mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
            auto wr = [&](std::size_t i, double& w, double& r) {
                w = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
                r = y[i] - mu[i];
            };
            Accumulated acc = accumulate_mapped(wr);
            final_gram = acc.gram;

            const double grad_norm = acc.rhs.cwiseAbs().maxCoeff();
            if (grad_norm <= spec.gradient_tol) {
                fit.converged = true;
                break;
            }

            Vector delta = solve_normal(acc.gram, acc.rhs);
            double new_dev = deviance_at(beta + delta);
            int halvings = 0;
            while (new_dev > dev + 1e-12 && halvings < 30) {
                delta *= 0.5;
                new_dev = deviance_at(beta + delta);
                ++halvings;
            }
            if (halvings == 30 && new_dev > dev + 1e-12) {
                // the step cannot improve the deviance at machine precision
                compute_eta(beta);
                fit.converged = true;
                break;
            }
            const bool stationary =
                std::fabs(dev - new_dev) <= 1e-10 * (std::fabs(new_dev) + 1.0);
            beta += delta;
            // deviance_at already refreshed eta for beta + delta
            dev = new_dev;
            fit.deviance_trace.push_back(dev);
            fit.iterations = iter + 1;
            if (stationary) {
                fit.converged = true;
                break;
            }
        }
        fit.deviance = dev;

        double max_eta = 0.0;
        for (std::size_t i = 0; i < n; ++i) max_eta = std::max(max_eta, std::fabs(eta[i]));
        fit.separation_flag = max_eta > 20.0;

        if (final_gram.size() == 0) {  // converged at beta = 0 before any step
            auto wr = [&](std::size_t i, double& w, double& r) {
                w = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
                r = y[i] - mu[i];
            };
            final_gram = accumulate_mapped(wr).gram;
        }
        Matrix cov = final_gram.ldlt().solve(
            Matrix::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
        fit.se.resize(k);
        for (std::size_t j = 0; j < k; ++j)
            fit.se[j] = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(j),
                                                    static_cast<Eigen::Index>(j))));
    }

    fit.coefficients.assign(beta.data(), beta.data() + beta.size());

    if (spec.cluster) fit.robust_se = cluster_robust_se(fit, data, *spec.cluster);
    return fit;
}

std::vector<double> cluster_robust_se(const GlmFit& fit, const DataTable& data,
                                      const std::string& cluster_column) {
    const auto y = data.numeric(fit.spec.response);
    const std::size_t n = y.size();
    const std::size_t k = fit.term_names.size();

    // Group labels: categorical column or formatted numeric column.
    std::vector<std::string> group(n);
    if (data.is_numeric(cluster_column)) {
        auto values = data.numeric(cluster_column);
        for (std::size_t i = 0; i < n; ++i) group[i] = format_double(values[i]);
    } else {
        auto values = data.categorical(cluster_column);
        group.assign(values.begin(), values.end());
    }
    std::map<std::string, std::size_t> group_index;
    for (const auto& g : group) group_index.emplace(g, group_index.size());
    const std::size_t n_groups = group_index.size();
    if (n_groups < 2) throw std::invalid_argument("cluster_robust_se: need >= 2 clusters");

    // Rebuild the kept design.
    const Design full_design = build_design(fit.spec, data);
    std::vector<std::ptrdiff_t> col_map(full_design.n_cols(), -1);
    {
        std::size_t j = 0;
        for (std::size_t c = 0; c < full_design.n_cols(); ++c) {
            if (j < fit.term_names.size() && full_design.names[c] == fit.term_names[j]) {
                col_map[c] = static_cast<std::ptrdiff_t>(j);
                ++j;
            }
        }
        if (j != fit.term_names.size())
            throw std::runtime_error("cluster_robust_se: design does not match fit");
    }

    Eigen::Map<const Vector> beta(fit.coefficients.data(),
                                  static_cast<Eigen::Index>(fit.coefficients.size()));
    Matrix bread_inv = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    Matrix scores = Matrix::Zero(static_cast<Eigen::Index>(n_groups), static_cast<Eigen::Index>(k));

    std::vector<std::pair<std::size_t, double>> scratch, row;
    for (std::size_t i = 0; i < n; ++i) {
        full_design.row(i, scratch);
        row.clear();
        for (const auto& [c, v] : scratch) {
            const std::ptrdiff_t m = col_map[c];
            if (m >= 0) row.emplace_back(static_cast<std::size_t>(m), v);
        }
        const double eta = sparse_dot(row, beta);
        double w, resid;
        if (fit.spec.family == GlmSpec::Family::logistic) {
            const double mu = 1.0 / (1.0 + std::exp(-eta));
            w = std::max(mu * (1.0 - mu), 1e-10);
            resid = y[i] - mu;
        } else {
            w = 1.0;
            resid = y[i] - eta;
        }
        const Eigen::Index g = static_cast<Eigen::Index>(group_index.at(group[i]));
        for (const auto& [c1, v1] : row) {
            scores(g, static_cast<Eigen::Index>(c1)) += v1 * resid;
            for (const auto& [c2, v2] : row)
                bread_inv(static_cast<Eigen::Index>(c1), static_cast<Eigen::Index>(c2)) +=
                    w * v1 * v2;
        }
    }

    Matrix bread = bread_inv.ldlt().solve(
        Matrix::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    Matrix meat = scores.transpose() * scores;

    const double G = static_cast<double>(n_groups);
    const double N = static_cast<double>(n);
    const double K = static_cast<double>(k);
    const double dof = (G / (G - 1.0)) * ((N - 1.0) / (N - K));

    Matrix v = dof * bread * meat * bread;
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j)
        out[j] = std::sqrt(
            std::max(0.0, v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
    return out;
}

void write_glm_fit(std::ostream& out, const GlmFit& fit) {
    nlohmann::json meta;
    meta["family"] = fit.spec.family == GlmSpec::Family::logistic ? "logistic" : "linear";
    meta["n_obs"] = fit.n_obs;
    meta["deviance"] = fit.deviance;
    meta["converged"] = fit.converged;
    meta["separation"] = fit.separation_flag;
    meta["iterations"] = fit.iterations;
    meta["dropped_columns"] = fit.dropped_columns;
    out << meta.dump() << '\n';
    out << "term,coefficient,se,robust_se,z,p\n";
    for (std::size_t j = 0; j < fit.term_names.size(); ++j) {
        const double se_used =
            fit.robust_se ? (*fit.robust_se)[j] : fit.se[j];
        const double z = se_used > 0 ? fit.coefficients[j] / se_used : 0.0;
        out << csv_escape(fit.term_names[j]) << ',' << format_double(fit.coefficients[j]) << ','
            << format_double(fit.se[j]) << ',';
        if (fit.robust_se) out << format_double((*fit.robust_se)[j]);
        out << ',' << format_double(z) << ',' << format_double(normal_two_sided_p(z)) << '\n';
    }
}

}  // namespace patnet

// Copyright 2026 The tqsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tqsynth/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace tqsynth {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr int kMaxGates = 8;

const std::array<Matrix4, 15>& pauli_products() {
    static const std::array<Matrix4, 15> table = [] {
        std::array<Eigen::Matrix2cd, 4> s;
        s[0] = Eigen::Matrix2cd::Identity();
        s[1] = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
        s[2] = (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
        s[3] = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
        std::array<Matrix4, 15> out;
        int idx = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                if (a == 0 && b == 0) continue;
                out[idx++] = kron2x2(s[a], s[b]);
            }
        return out;
    }();
    return table;
}

// full register index for a pair-local index (hi, lo) and spectator bit
inline int full_index(PairClass pc, int pair_idx, int spec) {
    const int hi = pair_idx >> 1, lo = pair_idx & 1;
    switch (pc) {
        case PairClass::AB: return 4 * hi + 2 * lo + spec;
        case PairClass::AC: return 4 * hi + 2 * spec + lo;
        default: return 4 * spec + 2 * hi + lo;
    }
}

// M(x, y) = sum_s W(full(x, s), full(y, s)); turns tr(W * embed(D)) into tr(M * D)
Matrix4 reduce_to_pair(PairClass pc, const Matrix8& w) {
    Matrix4 m;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            m(x, y) = w(full_index(pc, x, 0), full_index(pc, y, 0)) +
                      w(full_index(pc, x, 1), full_index(pc, y, 1));
    return m;
}

inline double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t structure_hash(const StructureSignature& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (PairClass p : s.pairs) {
        h ^= static_cast<std::uint64_t>(p) + 1;
        h *= 1099511628211ULL;
    }
    return h;
}

// Raw engine output mapped by hand so reruns are bit-identical across
// standard libraries (std distributions are implementation-defined).
inline double next_unit(std::mt19937_64& eng) { return (eng() >> 11) * 0x1.0p-53; }

struct GateWork {
    Matrix4 v;
    Eigen::Vector4d lam;
    Matrix8 e;
};

class Objective {
  public:
    Objective(const Matrix8& target, const StructureSignature& sig)
        : td_(target.adjoint()), pairs_(sig.pairs), k_(sig.k()) {}

    int dim() const { return 15 * k_; }

    double value(const Eigen::VectorXd& p) const {
        const auto& pp = pauli_products();
        Matrix8 u = Matrix8::Identity();
        for (int g = 0; g < k_; ++g) {
            Matrix4 h = Matrix4::Zero();
            for (int j = 0; j < 15; ++j) h += p[15 * g + j] * pp[j];
            Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
            const Eigen::Array4cd ph = (cplx(0, 1) * es.eigenvalues().cast<cplx>().array()).exp();
            const Matrix4 ug =
                es.eigenvectors() * ph.matrix().asDiagonal() * es.eigenvectors().adjoint();
            u = embed(pairs_[g], ug) * u;
        }
        return 1.0 - std::abs((td_ * u).trace()) / 8.0;
    }

    double value_and_grad(const Eigen::VectorXd& p, Eigen::VectorXd& grad, GradientMode mode,
                          double fd_step) const {
        const auto& pp = pauli_products();
        GateWork w[kMaxGates];
        for (int g = 0; g < k_; ++g) {
            Matrix4 h = Matrix4::Zero();
            for (int j = 0; j < 15; ++j) h += p[15 * g + j] * pp[j];
            Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
            w[g].v = es.eigenvectors();
            w[g].lam = es.eigenvalues();
            const Eigen::Array4cd ph = (cplx(0, 1) * w[g].lam.cast<cplx>().array()).exp();
            const Matrix4 ug = w[g].v * ph.matrix().asDiagonal() * w[g].v.adjoint();
            w[g].e = embed(pairs_[g], ug);
        }

        Matrix8 pre[kMaxGates + 1];
        pre[0] = Matrix8::Identity();
        for (int g = 0; g < k_; ++g) pre[g + 1] = w[g].e * pre[g];
        Matrix8 sfx[kMaxGates];
        sfx[k_ - 1] = Matrix8::Identity();
        for (int g = k_ - 2; g >= 0; --g) sfx[g] = sfx[g + 1] * w[g + 1].e;

        const cplx t = (td_ * pre[k_]).trace();
        const double tabs = std::abs(t);
        const double f = 1.0 - tabs / 8.0;

        grad.resize(dim());
        if (tabs < 1e-300) {
            grad.setZero();
            return f;
        }
        const cplx tdir = std::conj(t) / tabs;

        for (int g = 0; g < k_; ++g) {
            const Matrix8 wg = pre[g] * td_ * sfx[g];
            const Matrix4 m = reduce_to_pair(pairs_[g], wg);

            if (mode == GradientMode::analytic) {
                // dU = V (Phi ∘ (V^dag P V)) V^dag; contract against m once
                const Matrix4 b = w[g].v.adjoint() * m * w[g].v;
                Matrix4 kmat;
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) {
                        const double la = w[g].lam(r), lb = w[g].lam(c);
                        const cplx phi = cplx(0, 1) * std::exp(cplx(0, (la + lb) / 2)) *
                                         sinc((la - lb) / 2);
                        kmat(r, c) = b(c, r) * phi;
                    }
                const Matrix4 q = w[g].v.conjugate() * kmat * w[g].v.transpose();
                for (int j = 0; j < 15; ++j) {
                    const cplx dt = pp[j].cwiseProduct(q).sum();
                    grad[15 * g + j] = -std::real(tdir * dt) / 8.0;
                }
            } else {
                Matrix4 h = Matrix4::Zero();
                for (int j = 0; j < 15; ++j) h += p[15 * g + j] * pp[j];
                for (int j = 0; j < 15; ++j) {
                    double fs[2];
                    for (int dir = 0; dir < 2; ++dir) {
                        const Matrix4 hp = h + (dir == 0 ? fd_step : -fd_step) * pp[j];
                        Eigen::SelfAdjointEigenSolver<Matrix4> es(hp);
                        const Eigen::Array4cd ph =
                            (cplx(0, 1) * es.eigenvalues().cast<cplx>().array()).exp();
                        const Matrix4 up =
                            es.eigenvectors() * ph.matrix().asDiagonal() * es.eigenvectors().adjoint();
                        fs[dir] = 1.0 - std::abs((m * up).trace()) / 8.0;
                    }
                    grad[15 * g + j] = (fs[0] - fs[1]) / (2 * fd_step);
                }
            }
        }
        return f;
    }

  private:
    Matrix8 td_;
    std::vector<PairClass> pairs_;
    int k_;
};

struct DescentOutcome {
    double f = 0;
    Eigen::VectorXd x;
    int iterations = 0;
    std::vector<double> trace;
};

// L-BFGS (memory 8) with monotone Armijo backtracking.
DescentOutcome descend(const Objective& obj, Eigen::VectorXd x, const SearchConfig& cfg) {
    const int n = static_cast<int>(x.size());
    DescentOutcome out;
    Eigen::VectorXd g(n), gnew(n), xnew(n), q(n);
    double f = obj.value_and_grad(x, g, cfg.gradient, cfg.fd_step);
    if (cfg.record_trace) out.trace.push_back(f);

    std::deque<std::tuple<Eigen::VectorXd, Eigen::VectorXd, double>> hist;
    const double c1 = 1e-4;
    int small_steps = 0;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        if (f < 1e-14) break;
        if (g.norm() < 1e-12) break;

        // two-loop recursion
        q = g;
        std::vector<double> alpha(hist.size());
        for (int i = static_cast<int>(hist.size()) - 1; i >= 0; --i) {
            const auto& [s, y, rho] = hist[i];
            alpha[i] = rho * s.dot(q);
            q -= alpha[i] * y;
        }
        if (!hist.empty()) {
            const auto& [s, y, rho] = hist.back();
            q *= s.dot(y) / y.squaredNorm();
        }
        for (size_t i = 0; i < hist.size(); ++i) {
            const auto& [s, y, rho] = hist[i];
            const double beta = rho * y.dot(q);
            q += (alpha[i] - beta) * s;
        }
        Eigen::VectorXd d = -q;
        double gd = g.dot(d);
        if (gd > -1e-16) {
            d = -g;
            gd = -g.squaredNorm();
        }

        double step = it == 0 ? std::min(1.0, 1.0 / std::max(1.0, g.norm())) : 1.0;
        bool accepted = false;
        double fnew = f;
        for (int ls = 0; ls < 60; ++ls) {
            xnew = x + step * d;
            fnew = obj.value(xnew);
            if (fnew <= f + c1 * step * gd) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // numerical floor of the line search

        fnew = obj.value_and_grad(xnew, gnew, cfg.gradient, cfg.fd_step);
        const double improvement = f - fnew;
        Eigen::VectorXd s = xnew - x;
        Eigen::VectorXd y = gnew - g;
        const double sy = s.dot(y);
        if (sy > 1e-16) {
            hist.emplace_back(std::move(s), std::move(y), 1.0 / sy);
            if (hist.size() > 8) hist.pop_front();
        }
        x.swap(xnew);
        g.swap(gnew);
        f = fnew;
        if (cfg.record_trace) out.trace.push_back(f);

        if (improvement < cfg.convergence_tol) {
            if (++small_steps >= 2) {
                ++it;
                break;
            }
        } else {
            small_steps = 0;
        }
    }

    out.f = f;
    out.x = std::move(x);
    out.iterations = it;
    return out;
}

}  // namespace

std::vector<StructureSignature> enumerate_structures(int k) {
    if (k < 1) throw std::invalid_argument("enumerate_structures: k must be >= 1");
    if (k > 20) throw std::invalid_argument("enumerate_structures: k too large to enumerate");
    static const PairClass kOrder[] = {PairClass::AB, PairClass::AC, PairClass::BC};
    std::vector<StructureSignature> out;
    out.reserve(3u << (k - 1));
    std::vector<PairClass> cur;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(StructureSignature{cur});
            return;
        }
        for (PairClass p : kOrder) {
            if (!cur.empty() && cur.back() == p) continue;
            cur.push_back(p);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return out;
}

Matrix4 su4_from_params(const double* p) {
    const auto& pp = pauli_products();
    Matrix4 h = Matrix4::Zero();
    for (int j = 0; j < 15; ++j) h += p[j] * pp[j];
    Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
    const Eigen::Array4cd ph = (cplx(0, 1) * es.eigenvalues().cast<cplx>().array()).exp();
    return es.eigenvectors() * ph.matrix().asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> params_from_gate(const Matrix4& u) {
    const cplx det = u.determinant();
    const Matrix4 su = u * std::exp(cplx(0, -std::arg(det) / 4.0));
    const auto es = eig_unitary(ComplexMatrix(su));
    Matrix4 h = Matrix4::Zero();
    for (int j = 0; j < 4; ++j) {
        const Eigen::Vector4cd col = es.eigenvectors.col(j);
        h += std::arg(es.eigenvalues(j)) * (col * col.adjoint());
    }
    const auto& pp = pauli_products();
    std::vector<double> p(15);
    for (int j = 0; j < 15; ++j) p[j] = std::real((pp[j] * h).trace()) / 4.0;
    return p;
}

SearchResult optimize_structure(const ComplexMatrix& target, const StructureSignature& structure,
                                const SearchConfig& cfg,
                                const std::vector<double>* witness_params) {
    if (target.rows() != 8 || target.cols() != 8 || !is_unitary(target, 1e-10))
        throw std::invalid_argument("optimize_structure: target must be an 8x8 unitary");
    if (cfg.restarts < 1) throw std::invalid_argument("optimize_structure: restarts must be >= 1");
    const int k = structure.k();
    if (k < 1 || k > kMaxGates)
        throw std::invalid_argument("optimize_structure: structure must have 1..8 gates");
    if (witness_params && static_cast<int>(witness_params->size()) != 15 * k)
        throw std::invalid_argument("optimize_structure: witness parameter count mismatch");

    const Matrix8 t8 = target;
    const Objective obj(t8, structure);
    const std::uint64_t shash = splitmix64(cfg.seed ^ structure_hash(structure));

    auto run_one = [&](int r) {
        Eigen::VectorXd x0(15 * k);
        if (r == 0 && witness_params) {
            for (int i = 0; i < 15 * k; ++i) x0[i] = (*witness_params)[i];
        } else {
            std::mt19937_64 eng(splitmix64(shash + 0x9E3779B97F4A7C15ULL * (r + 1)));
            for (int i = 0; i < 15 * k; ++i) x0[i] = -kPi + 2 * kPi * next_unit(eng);
        }
        return descend(obj, std::move(x0), cfg);
    };

    std::vector<DescentOutcome> outs(cfg.restarts);
    int nthreads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp(nthreads, 1, cfg.restarts);
    if (nthreads <= 1) {
        for (int r = 0; r < cfg.restarts; ++r) outs[r] = run_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int tix = 0; tix < nthreads; ++tix)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < cfg.restarts; r = next.fetch_add(1))
                    outs[r] = run_one(r);
            });
        for (auto& th : pool) th.join();
    }

    // reduce in restart order; strict comparison keeps the earliest winner
    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (outs[r].f < outs[best].f) best = r;

    SearchResult res;
    res.structure = structure;
    res.per_restart.reserve(cfg.restarts);
    res.iterations_used.reserve(cfg.restarts);
    for (const auto& o : outs) {
        res.per_restart.push_back(o.f);
        res.iterations_used.push_back(o.iterations);
        if (cfg.record_trace) res.traces.push_back(o.trace);
    }
    Circuit c;
    for (int g = 0; g < k; ++g)
        c.gates.push_back({structure.pairs[g], su4_from_params(outs[best].x.data() + 15 * g),
                           "g" + std::to_string(g)});
    res.best_circuit = std::move(c);
    res.best_infidelity =
        infidelity(ComplexMatrix(circuit_unitary(res.best_circuit)), ComplexMatrix(t8));
    return res;
}

OptimalityReport optimality_evidence(const ComplexMatrix& target, const std::string& target_name,
                                     int k_max, const SearchConfig& cfg, const Circuit* witness) {
    if (k_max < 1 || k_max > 6)
        throw std::invalid_argument("optimality_evidence: k_max must be in [1, 6]");
    if (target.rows() != 8 || target.cols() != 8 || !is_unitary(target, 1e-10))
        throw std::invalid_argument("optimality_evidence: target must be an 8x8 unitary");

    StructureSignature wsig;
    std::vector<double> wparams;
    bool have_witness = false;
    if (witness) {
        const Circuit merged = merge_adjacent(*witness);
        wsig = signature_of(merged);
        if (wsig.k() >= 1 && wsig.k() <= k_max) {
            for (const auto& g : merged.gates) {
                const auto gp = params_from_gate(g.matrix);
                wparams.insert(wparams.end(), gp.begin(), gp.end());
            }
            have_witness = true;
        }
    }

    OptimalityReport rep;
    rep.target_name = target_name;
    rep.k_max = k_max;
    rep.seed = cfg.seed;
    rep.restarts = cfg.restarts;
    rep.verdict_k = -1;

    double running = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        for (const auto& sig : enumerate_structures(k)) {
            const std::vector<double>* wp = (have_witness && sig == wsig) ? &wparams : nullptr;
            SearchResult sr = optimize_structure(target, sig, cfg, wp);
            running = std::min(running, sr.best_infidelity);
            rep.structures.push_back({sig, sr.best_infidelity, std::move(sr.per_restart)});
        }
        rep.floors.push_back(running);  // best over all structures with <= k gates
        if (rep.verdict_k < 0 && running < rep.positive_threshold) rep.verdict_k = k;
    }

    std::ostringstream v;
    if (rep.verdict_k > 0)
        v << "smallest k with infidelity below " << rep.positive_threshold << " is k = "
          << rep.verdict_k;
    else
        v << "no structure with k <= " << k_max << " reached infidelity below "
          << rep.positive_threshold;
    v << " (empirical thresholds, numerical evidence only, not a proof)";
    rep.verdict = v.str();
    return rep;
}

std::string report_to_json(const OptimalityReport& r) {
    nlohmann::json j;
    j["target"] = r.target_name;
    j["k_max"] = r.k_max;
    j["seed"] = r.seed;
    j["restarts"] = r.restarts;
    j["thresholds"] = {{"positive", r.positive_threshold},
                       {"negative", r.negative_threshold},
                       {"note", "empirical evidence thresholds, not proof"}};
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : r.structures) {
        nlohmann::json js;
        js["k"] = s.structure.k();
        nlohmann::json pairs = nlohmann::json::array();
        for (PairClass p : s.structure.pairs) pairs.push_back(to_string(p));
        js["pairs"] = pairs;
        js["best_infidelity"] = s.best_infidelity;
        js["restarts"] = s.per_restart;
        st.push_back(js);
    }
    j["structures"] = st;
    nlohmann::json fl = nlohmann::json::array();
    for (size_t k = 0; k < r.floors.size(); ++k)
        fl.push_back({{"k", k + 1}, {"min_infidelity", r.floors[k]}});
    j["floors"] = fl;
    j["verdict_k"] = r.verdict_k;
    j["verdict"] = r.verdict;
    return j.dump(2);
}

}  // namespace tqsynth

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace negembed::space {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a; // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline int rank(Matrix m, double tol_scale = 1e-10) {
    double maxabs = 0.0;
    for (double x : m.a) maxabs = std::max(maxabs, std::abs(x));
    if (maxabs == 0.0) return 0;
    const double tol = tol_scale * maxabs;
    int r = 0;
    for (int col = 0; col < m.cols && r < m.rows; ++col) {
        int piv = -1;
        double best = tol;
        for (int i = r; i < m.rows; ++i) {
            if (std::abs(m.at(i, col)) > best) {
                best = std::abs(m.at(i, col));
                piv = i;
            }
        }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv, j));
        for (int i = r + 1; i < m.rows; ++i) {
            const double f = m.at(i, col) / m.at(r, col);
            for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        ++r;
    }
    return r;
}

/// l_q norm (q = inf means max-norm; 0 < q < 1 gives the quasi-norm).
struct LqNorm {
    double q = 2.0;
    int n = 0;
};

/// ||x|| = (sum_j |sum_i x_i s_ij|^r)^{1/r} for an n x m atom matrix s.
struct SpectralSubspace {
    Matrix atoms;
    double r = 1.0;
};

using SpaceSpec = std::variant<LqNorm, SpectralSubspace>;

inline int dim(const SpaceSpec& s) {
    if (const auto* lq = std::get_if<LqNorm>(&s)) return lq->n;
    return std::get<SpectralSubspace>(s).atoms.rows;
}

inline void validate(const SpaceSpec& s) {
    if (const auto* lq = std::get_if<LqNorm>(&s)) {
        if (lq->n < 1) throw std::invalid_argument("LqNorm: dimension must be >= 1");
        if (!(lq->q > 0.0)) throw std::invalid_argument("LqNorm: q must be in (0, inf]");
        return;
    }
    const auto& sp = std::get<SpectralSubspace>(s);
    if (sp.atoms.rows < 1 || sp.atoms.cols < 1)
        throw std::invalid_argument("SpectralSubspace: empty atom matrix");
    if (!(sp.r > 0.0 && sp.r <= 2.0))
        throw std::invalid_argument("SpectralSubspace: r must be in (0, 2]");
    if (rank(sp.atoms) < sp.atoms.rows)
        throw std::invalid_argument(
            "SpectralSubspace: atom matrix must have full row rank (the norm "
            "degenerates otherwise)");
}

inline double lq_norm(double q, std::span<const double> x) {
    if (q == kInf) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), q);
    return std::pow(s, 1.0 / q);
}

inline double norm(const SpaceSpec& spec, std::span<const double> x) {
    if (const auto* lq = std::get_if<LqNorm>(&spec)) return lq_norm(lq->q, x);
    const auto& sp = std::get<SpectralSubspace>(spec);
    const int n = sp.atoms.rows, m = sp.atoms.cols;
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += x[static_cast<std::size_t>(i)] * sp.atoms.at(i, j);
        s += std::pow(std::abs(dot), sp.r);
    }
    return std::pow(s, 1.0 / sp.r);
}

inline std::string label(const SpaceSpec& spec) {
    if (const auto* lq = std::get_if<LqNorm>(&spec)) {
        std::ostringstream os;
        if (lq->q == kInf)
            os << "linf^" << lq->n;
        else
            os << "l" << lq->q << "^" << lq->n;
        return os.str();
    }
    const auto& sp = std::get<SpectralSubspace>(spec);
    std::ostringstream os;
    os << "spectral(" << sp.atoms.rows << "x" << sp.atoms.cols << ", r=" << sp.r << ")";
    return os.str();
}

/// Atom CSV format: first line `m=<int>`, then n rows of m comma-separated reals.
inline Matrix load_atoms_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("atoms csv: empty file");
    if (line.rfind("m=", 0) != 0) throw std::invalid_argument("atoms csv: expected header m=<int>");
    const int m = std::stoi(line.substr(2));
    if (m < 1) throw std::invalid_argument("atoms csv: m must be >= 1");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != m)
            throw std::invalid_argument("atoms csv: row with wrong column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("atoms csv: no data rows");
    Matrix out(static_cast<int>(rows.size()), m);
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < m; ++j) out.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

inline Matrix load_atoms_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("atoms csv: cannot open " + path);
    return load_atoms_csv(f);
}

/// Circulant coupling preset: row i = e_i + e_{i+1 mod n}. For n = 4 this is
/// [[1,1,0,0],[0,1,1,0],[0,0,1,1],[1,0,0,1]].
inline Matrix coupled_atoms(int n) {
    if (n < 2) throw std::invalid_argument("coupled atoms: need n >= 2");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = 1.0;
        m.at(i, (i + 1) % n) = 1.0;
    }
    return m;
}

} // namespace negembed::space

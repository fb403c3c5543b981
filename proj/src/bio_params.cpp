#include "sitsim/bio_params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sitsim {

const std::array<LabTableRow, 5>& lab_table() {
    // Laboratory measurements for Aedes albopictus at five rearing
    // temperatures; percentage columns stored as proportions.
    static const std::array<LabTableRow, 5> rows{{
        {15.0, 0.082, 0.0, std::nullopt, 35.0, 0.500, 15.45, 19.65},
        {20.0, 0.669, 50.8, 8.1, 14.4, 0.775, 10.25, 15.15},
        {25.0, 0.492, 65.3, 3.1, 10.4, 0.763, 9.60, 15.30},
        {30.0, 0.514, 74.2, 3.9, 8.8, 0.675, 8.55, 16.90},
        {35.0, 0.100, 48.7, 1.3, 12.3, 0.025, 7.40, 10.00},
    }};
    return rows;
}

EntoParams derive_rates(const LabTableRow& row) {
    if (row.s_A <= 0.0 || row.s_A > 1.0)
        throw DataError("survivorship must be in (0,1]");
    if (row.tau_A <= 0.0 || row.tau_M <= 0.0 || row.tau_F <= 0.0)
        throw DataError("durations must be > 0");
    EntoParams ep;
    ep.phi = row.tau_gono ? row.r_viable * row.N_eggs / *row.tau_gono : 0.0;
    ep.mu_A1 = -std::log(row.s_A) / row.tau_A;
    ep.gamma = 1.0 / row.tau_A;
    ep.mu_M = std::log(2.0) / row.tau_M;
    ep.mu_F = std::log(2.0) / row.tau_F;
    ep.mu_S = ep.mu_M;
    ep.r = 0.5;
    return ep;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw ConfigError("spline needs >= 2 knots");
    for (std::size_t i = 1; i < n; ++i)
        if (x_[i] <= x_[i - 1]) throw ConfigError("spline knots must increase");

    // Natural boundary conditions: tridiagonal solve for the second
    // derivatives (Thomas algorithm).
    m_.assign(n, 0.0);
    if (n == 2) return;
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1];
        double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1];  // sub-diagonal entry
        double w = h0 / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

double CubicSpline::operator()(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    std::size_t hi = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    if (hi == x_.size()) --hi;
    if (hi == 0) ++hi;
    std::size_t lo = hi - 1;
    double h = x_[hi] - x_[lo];
    double a = (x_[hi] - x) / h;
    double b = (x - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

const std::array<std::array<double, 5>, 5>& RateSplines::published_knots() {
    // Rounded rate values as published: phi, mu_A1, gamma, mu_M, mu_F.
    static const std::array<std::array<double, 5>, 5> knots{{
        {0.0, 4.1957, 10.3637, 9.7792, 3.7462},
        {0.0198, 0.0177, 0.0260, 0.0447, 0.2999},
        {0.0286, 0.0694, 0.0962, 0.1136, 0.0813},
        {0.0449, 0.0676, 0.0722, 0.0811, 0.0937},
        {0.0353, 0.0458, 0.0453, 0.0413, 0.0693},
    }};
    return knots;
}

namespace {

CubicSpline knot_spline(const std::array<double, 5>& values) {
    std::vector<double> x(RateSplines::knot_temps.begin(),
                          RateSplines::knot_temps.end());
    return CubicSpline(x, std::vector<double>(values.begin(), values.end()));
}

}  // namespace

RateSplines::RateSplines() {
    const auto& k = published_knots();
    phi_ = knot_spline(k[0]);
    mu_A1_ = knot_spline(k[1]);
    gamma_ = knot_spline(k[2]);
    mu_M_ = knot_spline(k[3]);
    mu_F_ = knot_spline(k[4]);
}

RateSplines::RateSplines(const std::array<LabTableRow, 5>& rows,
                         bool use_published_knots) {
    if (use_published_knots) {
        *this = RateSplines();
        return;
    }
    std::array<std::array<double, 5>, 5> k{};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EntoParams ep = derive_rates(rows[i]);
        k[0][i] = ep.phi;
        k[1][i] = ep.mu_A1;
        k[2][i] = ep.gamma;
        k[3][i] = ep.mu_M;
        k[4][i] = ep.mu_F;
    }
    phi_ = knot_spline(k[0]);
    mu_A1_ = knot_spline(k[1]);
    gamma_ = knot_spline(k[2]);
    mu_M_ = knot_spline(k[3]);
    mu_F_ = knot_spline(k[4]);
}

EntoParams RateSplines::at(double temp) const {
    double t = std::clamp(temp, knot_temps.front(), knot_temps.back());
    EntoParams ep;
    ep.phi = std::max(0.0, phi_(t));
    ep.mu_A1 = std::max(0.0, mu_A1_(t));
    ep.gamma = std::max(0.0, gamma_(t));
    ep.mu_M = std::max(0.0, mu_M_(t));
    ep.mu_F = std::max(0.0, mu_F_(t));
    ep.mu_S = ep.mu_M;
    ep.r = 0.5;
    return ep;
}

EntoParams rates_at(double temp, const RateSplines& splines) {
    return splines.at(temp);
}

double basic_offspring(const EntoParams& ep) {
    double denom = (ep.gamma + ep.mu_A1) * ep.mu_F;
    if (denom <= 0.0) throw DataError("zero denominator in offspring number");
    return ep.r * ep.phi * ep.gamma / denom;
}

double q_factor(const EntoParams& ep, double mu_A2) {
    if (mu_A2 <= 0.0) throw DataError("Q undefined: mu_A2 must be > 0");
    if (ep.mu_M <= 0.0) throw DataError("Q undefined: mu_M must be > 0");
    return (1.0 - ep.r) * ep.gamma * (ep.gamma + ep.mu_A1) / (mu_A2 * ep.mu_M);
}

std::array<LabTableRow, 5> load_lab_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lab table: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "temp,r_viable,n_eggs,tau_gono,tau_a,s_a,tau_m,tau_f")
        throw DataError(path + ": unexpected lab-table header");
    std::array<LabTableRow, 5> rows{};
    std::size_t i = 0;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (i >= rows.size()) throw DataError(path + ": expected exactly 5 rows");
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8)
            throw DataError(path + " line " + std::to_string(line_no) +
                            ": expected 8 fields");
        LabTableRow& row = rows[i++];
        row.temp = std::stod(fields[0]);
        row.r_viable = std::stod(fields[1]);
        row.N_eggs = std::stod(fields[2]);
        if (fields[3] != "NA" && !fields[3].empty())
            row.tau_gono = std::stod(fields[3]);
        row.tau_A = std::stod(fields[4]);
        row.s_A = std::stod(fields[5]);
        row.tau_M = std::stod(fields[6]);
        row.tau_F = std::stod(fields[7]);
    }
    if (i != rows.size()) throw DataError(path + ": expected exactly 5 rows");
    return rows;
}

}  // namespace sitsim

#include "matchfree/inequalities.hpp"

#include "matchfree/errors.hpp"

#include <sstream>

namespace matchfree {

namespace {

// C(N, 0..top) by the multiplicative recurrence; negative k reads as 0.
class BinomRow {
public:
    BinomRow(long n, long top) : n_(n) {
        row_.reserve(static_cast<std::size_t>(top + 1));
        Integer c = 1;
        for (long k = 0; k <= top; ++k) {
            row_.push_back(c);
            c = c * (n - k) / (k + 1);
        }
    }
    Rational operator()(long k) const {
        if (k < 0 || k > n_) return 0;
        return Rational(row_.at(static_cast<std::size_t>(k)));
    }

private:
    long n_;
    std::vector<Integer> row_;
};

class Recorder {
public:
    Recorder(int s, int m, std::vector<InequalityRecord>& out) : s_(s), m_(m), out_(out) {}

    // lhs <= rhs, valid for m >= min_m (and m <= max_m when given)
    void le(const std::string& id, const Rational& lhs, const Rational& rhs, int min_m, bool vacuous = false,
            int k = -1, int max_m = 0) {
        push(id, rhs - lhs, min_m, max_m, vacuous, k, Kind::Le);
    }
    void lt(const std::string& id, const Rational& lhs, const Rational& rhs, int min_m, int max_m = 0) {
        push(id, rhs - lhs, min_m, max_m, false, -1, Kind::Lt);
    }
    void eq(const std::string& id, const Rational& lhs, const Rational& rhs, int min_m) {
        push(id, rhs - lhs, min_m, 0, false, -1, Kind::Eq);
    }

private:
    enum class Kind { Le, Lt, Eq };
    void push(const std::string& id, Rational margin, int min_m, int max_m, bool vacuous, int k, Kind kind) {
        InequalityRecord r;
        r.id = id;
        r.s = s_;
        r.m = m_;
        r.k = k;
        r.margin = std::move(margin);
        r.vacuous = vacuous;
        r.equality = kind == Kind::Eq;
        const int sign = sgn(r.margin);
        r.holds = vacuous || (kind == Kind::Le ? sign >= 0 : kind == Kind::Lt ? sign > 0 : sign == 0);
        r.in_range = m_ >= min_m && (max_m == 0 || m_ <= max_m);
        r.expected_fail = !r.in_range && !r.holds;
        out_.push_back(std::move(r));
    }

    int s_, m_;
    std::vector<InequalityRecord>& out_;
};

// eq005 and its ratio premise for every k <= m. Collapsed mode keeps, per
// id, the record with the smallest non-vacuous margin and ANDs the verdicts.
void geometric_bounds(int s, int m, const BinomRow& c, std::vector<InequalityRecord>& out, const AuditOptions& options) {
    const long n = static_cast<long>(s) * m + s - 2;
    std::vector<InequalityRecord> per_k;
    Recorder rec(s, m, per_k);
    Rational prefix = 0;  // sum_{j=1}^{k-1} C(n, j)
    for (int k = 1; k <= m; ++k) {
        if (k >= 2) prefix += c(k - 1);
        rec.le("eq005", prefix, c(k) / (s - 2), 1, k == 1, k);
        // C(n, k) / C(n, k-1) >= s - 1; larger j only raises the ratio
        rec.le("eq005-ratio", Rational(s - 1), make_rational(n - k + 1, k), 1, false, k);
    }
    if (options.expand_k) {
        for (auto& r : per_k) out.push_back(std::move(r));
        return;
    }
    for (const char* id : {"eq005", "eq005-ratio"}) {
        const InequalityRecord* keep = nullptr;
        bool all = true;
        for (const auto& r : per_k) {
            if (r.id != id) continue;
            all = all && r.holds;
            if (!keep || (keep->vacuous && !r.vacuous) || (!r.vacuous && r.margin < keep->margin)) keep = &r;
        }
        InequalityRecord merged = *keep;
        merged.holds = all;
        merged.expected_fail = !merged.in_range && !merged.holds;
        out.push_back(std::move(merged));
    }
}

void audit_s3(int m, std::vector<InequalityRecord>& out, const AuditOptions& options) {
    const long n = 3L * m + 1;
    const BinomRow c(n, m + 5);
    Recorder rec(3, m, out);
    geometric_bounds(3, m, c, out, options);

    const Rational alpha = make_rational((3L * m + 2) * m, 4L * (2 * m + 3) * (2 * m + 1));
    const Rational alpha_p = 1 - 2 * alpha;

    Rational small = 0;
    for (long k = 1; k <= m - 3; ++k) small += c(k);
    rec.le("stage1-s3", small / 2, c(m + 2) / 16, 3, m <= 3);
    rec.lt("stage1-s3-chain", c(m - 2) / 2, c(m + 2) / 16, 1);

    rec.le("stage2-s3", 2 * c(m - 2) + 2 * c(m - 1), c(m + 3), 3);
    rec.le("stage2-s3-chain", c(m + 1), c(m + 3), 3);
    rec.le("stage3-s3", c(m - 2) + c(m - 1), c(m + 2) / 4, 1);
    rec.eq("eq77", (c(m - 2) + c(m - 1)) / 2, alpha * c(m + 1), 1);
    rec.lt("alpha-order", alpha, alpha_p, 1);

    // worst case q = m + 2 of the decreasing ratio 3(q-m)/(3q-n)
    rec.le("eq78-ratio", make_rational(6, 3 * (m + 2) - n), make_rational(6, 5), 1);
    rec.le("eq78", make_rational(6L * (m + 1), 5L * (2 * m + 1)), alpha_p, 1);
    rec.lt("eq78-fraction", make_rational(39L * m * m + 70L * m + 36, 40L * m * m + 80L * m + 30), Rational(1), 1);
    rec.le("eq11", make_rational(3L * (m + 1), 2L * m + 1), 2 - 2 * alpha, 3);
    rec.lt("eq11-fraction", make_rational(15L * m * m + 32L * m + 18, 8L * m * m + 16L * m + 6), Rational(2), 3);
    rec.le("alpha-bound", alpha, make_rational(3, 16), 1);
    rec.lt("capacity-order", 2 - 2 * alpha, 3 - 7 * alpha, 1);
    rec.le("special-capacity", make_rational(3L * (m + 1), 2L * m + 1), 3 * alpha_p - alpha, 1);
    if (m == 2) rec.le("s3-m2-variant", make_rational(3, 2) * c(m), c(m + 1), 2, false, -1, 2);
}

void audit_s4(int m, std::vector<InequalityRecord>& out, const AuditOptions& options) {
    const long n = 4L * m + 2;
    const BinomRow c(n, m + 5);
    Recorder rec(4, m, out);
    geometric_bounds(4, m, c, out, options);

    const Rational wl1 = make_rational(m, 5L * (3 * m + 2)) * c(m + 1);
    const Rational wc1 = c(m + 1) / 2 - make_rational(3, 2) * wl1;

    Rational below = 0;
    for (long k = 1; k <= m - 1; ++k) below += c(k);
    const bool empty = m <= 1;
    rec.le("stage1-s4", 3 * below, c(m + 5), 2, empty);
    rec.lt("stage1-s4-chain", make_rational(9, 2) * c(m - 1), c(m + 5), 2);
    rec.le("stage2-s4", below / 2, c(m + 2) / 22, 1, empty);
    rec.lt("stage2-s4-chain", make_rational(3, 4) * c(m - 1), c(m + 2) / 22, 1);
    rec.le("stage3-s4", below / 3, wl1, 1, empty);
    rec.lt("stage3-s4-chain", c(m - 1) / 2, wl1, 1);
    rec.lt("wc-positive", Rational(0), wc1, 1);

    rec.le("eq0667-ratio", make_rational(8, 4L * (m + 1) - n), Rational(4), 1);
    rec.le("eq0667", make_rational(4L * (m + 1) * (m + 2), (3L * m + 2) * (3L * m + 1)), make_rational(8, 11), 3);
    rec.le("eq0666-ratio", make_rational(2, 4L * (m + 1) - n), Rational(1), 1);
    rec.eq("eq0666", 2 * c(m), c(m + 1) - 5 * wl1, 1);
    if (m == 2) {
        rec.le("s4-m2-variant-a", make_rational(2L * m + 2, 3L * m + 2), Rational(1), 2, false, -1, 2);
        rec.le("s4-m2-variant-b", make_rational(4L * (m + 1) * (m + 2), (3L * m + 2) * (3L * m + 1)), Rational(1), 2,
               false, -1, 2);
    }
}

}  // namespace

std::vector<InequalityRecord> audit(int s, int m_max, const AuditOptions& options) {
    if (s != 3 && s != 4) throw InvalidParams("inequality audit covers s = 3 and s = 4 only");
    if (m_max < 1) throw InvalidParams("m_max must be at least 1");
    std::vector<InequalityRecord> out;
    for (int m = 1; m <= m_max; ++m) (s == 3 ? audit_s3 : audit_s4)(m, out, options);
    return out;
}

std::string audit_csv(const std::vector<InequalityRecord>& records) {
    std::ostringstream os;
    os << "id,s,m,k,holds,vacuous,margin\n";
    for (const InequalityRecord& r : records)
        os << r.id << ',' << r.s << ',' << r.m << ',' << (r.k < 0 ? std::string() : std::to_string(r.k)) << ','
           << (r.holds ? "true" : "false") << ',' << (r.vacuous ? "true" : "false") << ',' << to_string(r.margin)
           << '\n';
    return os.str();
}

}  // namespace matchfree

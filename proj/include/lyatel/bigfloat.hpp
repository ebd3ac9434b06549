#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace lyatel {

// Thin RAII wrapper over an mpfr_t. Arithmetic results take the wider
// precision of the operands; values are immutable after construction in
// the sense that all operations return new objects.
class BigFloat {
  public:
    BigFloat() {
        mpfr_init2(v_, 53);
        mpfr_set_zero(v_, 1);
    }
    explicit BigFloat(double x, mpfr_prec_t prec = 53) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    static BigFloat with_prec(double x, mpfr_prec_t prec) { return BigFloat(x, prec); }

#define LYATEL_BF_BINOP(op, fn)                                              \
    friend BigFloat operator op(const BigFloat& a, const BigFloat& b) {      \
        BigFloat r = reserve(a, b);                                          \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                     \
        return r;                                                            \
    }
    LYATEL_BF_BINOP(+, mpfr_add)
    LYATEL_BF_BINOP(-, mpfr_sub)
    LYATEL_BF_BINOP(*, mpfr_mul)
    LYATEL_BF_BINOP(/, mpfr_div)
#undef LYATEL_BF_BINOP

    friend BigFloat operator-(const BigFloat& a) {
        BigFloat r(0.0, a.precision());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }

#define LYATEL_BF_UNFN(name, fn)                                             \
    friend BigFloat name(const BigFloat& a) {                                \
        BigFloat r(0.0, a.precision());                                      \
        fn(r.v_, a.v_, MPFR_RNDN);                                           \
        return r;                                                            \
    }
    LYATEL_BF_UNFN(abs, mpfr_abs)
    LYATEL_BF_UNFN(sqrt, mpfr_sqrt)
    LYATEL_BF_UNFN(exp, mpfr_exp)
    LYATEL_BF_UNFN(log, mpfr_log)
    LYATEL_BF_UNFN(sin, mpfr_sin)
    LYATEL_BF_UNFN(cos, mpfr_cos)
#undef LYATEL_BF_UNFN

    friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
        BigFloat r = reserve(y, x);
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat hypot(const BigFloat& x, const BigFloat& y) {
        BigFloat r = reserve(x, y);
        mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat root_n(const BigFloat& a, unsigned long n) {
        BigFloat r(0.0, a.precision());
        mpfr_rootn_ui(r.v_, a.v_, n, MPFR_RNDN);
        return r;
    }
    friend BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
    friend BigFloat min(const BigFloat& a, const BigFloat& b) { return a < b ? a : b; }

  private:
    static BigFloat reserve(const BigFloat& a, const BigFloat& b) {
        mpfr_prec_t p = a.precision() > b.precision() ? a.precision() : b.precision();
        return BigFloat(0.0, p);
    }
    mpfr_t v_;
};

// Uniform scalar interface used by the templated pullback engine.
inline double scalar_from_double(double x, int /*bits*/, double /*model*/) { return x; }
inline BigFloat scalar_from_double(double x, int bits, const BigFloat& /*model*/) {
    return BigFloat(x, bits);
}
inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.to_double(); }
inline bool scalar_finite(double x) { return x == x && x < 1e308 && x > -1e308; }
inline bool scalar_finite(const BigFloat& x) { return x.is_finite(); }

} // namespace lyatel

#include "lyatel/telescope.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <map>

#include "lyatel/csv.hpp"
#include "nlohmann/json.hpp"

namespace lyatel {

namespace {

// ----------------------------------------------------------------------------
// Inverse-branch circle tracer, generic over the real scalar so the same code
// runs in double and in extended precision.
//
// Boundary points are stored as OFFSETS from the orbit point of their level.
// One pullback level maps an offset h at level l+1 to an offset at level l via
// log1p/expm1 kernels, so relative accuracy survives arbitrarily deep
// contraction (absolute coordinates would collapse onto the orbit point once
// the region shrinks below eps * |z_l|). Offsets comparable to the distance
// from the singular value fall back to absolute candidate selection with the
// usual continuity reference.
//
// A trace keeps one "ray" per boundary sample: the full chain of its offsets
// through the levels done so far. Continuation references are the neighboring
// ray at the same level, so branch selection follows the curve; the spine (a
// pulled-back radius of the disk) anchors the first ray to the orbit itself.
// ----------------------------------------------------------------------------

template <class R>
class TraceEngine {
  public:
    TraceEngine(const MapSpec& map, const Orbit& orbit, const TelescopeOptions& opt, double ctol)
        : map_(map), opt_(opt), bits_(opt.precision_bits), ctol_(ctol) {
        model_ = scalar_from_double(0.0, bits_, R{});
        pts_.reserve(orbit.z.size());
        if (bits_ <= 53) {
            for (auto z : orbit.z) pts_.push_back(cx_from_std(z, bits_, model_));
        } else {
            // re-run the orbit at full precision so anchors match the engine
            Cx<R> z = cx_from_std(orbit.z0, bits_, model_);
            pts_.push_back(z);
            for (size_t k = 1; k < orbit.z.size(); ++k) {
                z = map_eval_t<R>(map_, z, bits_);
                pts_.push_back(z);
            }
        }
        sing_ = cx_from_std(map.c, bits_, model_);
    }

    // Traces dB(z_from, t) down to to_level. Containment is checked at every
    // level strictly above to_level, and at to_level itself iff check_final.
    // Returns the crossed level, or -1 if clean. Optionally dumps the
    // (absolute) polyline of every traced level.
    int trace(const R& t, int from, int to_level, bool check_final,
              std::map<int, std::vector<Cx<R>>>* dump = nullptr, int measure_level = -1,
              Cx<R>* measure_point = nullptr, R* measured_dist = nullptr) {
        from_ = from;
        rays_.clear();
        spine_.clear();
        ctx_.assign(1, LevelCtx{}); // depth 0 placeholder
        budget_ = opt_.max_rays;

        const Cx<R>& center = pts_[from];
        if (check_final || from > to_level) {
            R gap = cx_dist(sing_, center);
            if (!(gap > t + scalar_from_double(ctol_, bits_, model_))) {
                if (dump) (*dump)[from] = absolute(circle_offsets(t), from);
                return from;
            }
        }
        if (dump) (*dump)[from] = absolute(circle_offsets(t), from);

        const int spine_init = 33;
        for (int k = 0; k < spine_init; ++k) {
            Ray s;
            s.theta = double(k) / (spine_init - 1);
            s.val.push_back(spine_offset(s.theta, t));
            spine_.push_back(std::move(s));
        }
        for (int k = 0; k < opt_.samples; ++k) {
            Ray r;
            r.theta = double(k) / opt_.samples;
            r.val.push_back(ring_offset(r.theta, t));
            rays_.push_back(std::move(r));
        }

        for (int l = from - 1; l >= to_level; --l) {
            int d = from - l;
            ctx_.push_back(make_ctx(l));
            advance_spine(l, d, t);
            advance_ring(l, d, t);
            if (dump) (*dump)[l] = absolute(ring_polyline(d), l);
            if (measure_level == l && measure_point && measured_dist) {
                Cx<R> q = *measure_point - pts_[l];
                *measured_dist = refined_min_distance(q, d, l, t, /*for_decision=*/false);
            }
            if (l > to_level || check_final) {
                if (crossed_at(d, l, t)) return l;
            }
        }
        return -1;
    }

    std::vector<Cx<R>> ring_polyline(int d) const {
        std::vector<Cx<R>> poly;
        poly.reserve(rays_.size());
        for (const auto& r : rays_) poly.push_back(r.val[d]);
        return poly;
    }

    std::vector<Cx<R>> absolute(std::vector<Cx<R>> poly, int level) const {
        for (auto& p : poly) p = p + pts_[level];
        return poly;
    }

  private:
    struct Ray {
        double theta; // turns in [0,1) for the ring; s in [0,1] for the spine
        std::vector<Cx<R>> val;
    };
    using List = std::list<Ray>;
    using It = typename List::iterator;

    // per-depth pullback context: B = z_{l+1} - c and, for the polynomial,
    // the branch root of B adjacent to z_l
    struct LevelCtx {
        Cx<R> B{};
        Cx<R> root{};
    };

    LevelCtx make_ctx(int l) {
        LevelCtx c;
        c.B = pts_[l + 1] - sing_;
        if (map_.family == MapFamily::UnicriticalPoly) {
            const int d = map_.degree;
            R r = root_n(cx_abs(c.B), (unsigned long)d);
            R base = cx_arg(c.B) / scalar_from_double(double(d), bits_, model_);
            bool have = false;
            R best_dist{};
            for (int k = 0; k < d; ++k) {
                R ang = base + scalar_from_double(2.0 * M_PI * k / d, bits_, model_);
                Cx<R> cand{r * cos(ang), r * sin(ang)};
                R dist = cx_dist(cand, pts_[l]);
                if (!have || dist < best_dist) {
                    have = true;
                    best_dist = dist;
                    c.root = cand;
                }
            }
            // the chosen root reproduces z_l up to roundoff, else the orbit
            // and the branch disagree
            if (to_double(best_dist) > 1e-6 * (1.0 + to_double(cx_abs(pts_[l]))))
                throw Error("internal: branch root does not match the orbit point");
        }
        return c;
    }

    Cx<R> ring_offset(double theta, const R& t) const {
        double ang = 2.0 * M_PI * theta;
        return {t * scalar_from_double(std::cos(ang), bits_, model_),
                t * scalar_from_double(std::sin(ang), bits_, model_)};
    }
    Cx<R> spine_offset(double s, const R& t) const {
        return {t * scalar_from_double(s, bits_, model_), scalar_from_double(0.0, bits_, model_)};
    }
    std::vector<Cx<R>> circle_offsets(const R& t) const {
        std::vector<Cx<R>> poly;
        poly.reserve(opt_.samples);
        for (int k = 0; k < opt_.samples; ++k) poly.push_back(ring_offset(double(k) / opt_.samples, t));
        return poly;
    }

    void spend() {
        if (--budget_ < 0) throw PrecisionExhausted("trace exceeded the boundary-point budget");
    }

    struct StepOut {
        Cx<R> value{};
        PullStatus status = PullStatus::Ok;
    };

    // offset h at level l+1 (depth d-1) -> offset at level l (depth d)
    StepOut pull_offset(int d, const Cx<R>& h, const Cx<R>& neighbor_ref) {
        const LevelCtx& cx = ctx_[d];
        int l = from_ - d;
        Cx<R> u = h / cx.B;
        StepOut out;
        if (to_double(cx_abs(u)) < 0.25) {
            if (map_.family == MapFamily::UnicriticalPoly) {
                Cx<R> lg = cx_log1p(u, bits_);
                R dd = scalar_from_double(double(map_.degree), bits_, model_);
                out.value = cx.root * cx_expm1(Cx<R>{lg.re / dd, lg.im / dd}, bits_);
            } else {
                out.value = cx_log1p(u, bits_);
            }
        } else {
            Cx<R> target = pts_[l + 1] + h;
            Cx<R> ref = pts_[l] + neighbor_ref;
            auto abs_out = pull_back_toward<R>(map_, ref, target, bits_);
            if (abs_out.status != PullStatus::Ok) {
                out.status = abs_out.status;
                return out;
            }
            out.value = abs_out.value - pts_[l];
        }
        if (bits_ <= 53) {
            double mag = to_double(cx_abs(out.value));
            if (mag != 0.0 && mag < opt_.underflow_guard)
                throw PrecisionExhausted(
                    "traced offsets underflow double precision; retry with more mantissa bits");
        }
        return out;
    }

    // chord-vs-local-scale criterion; offsets are distances to the center
    bool jump_ok(const Cx<R>& a, const Cx<R>& b) const {
        double chord = to_double(cx_dist(a, b));
        double scale = to_double(cx_abs(a)) + to_double(cx_abs(b));
        return chord <= opt_.arc_frac * scale;
    }

    // Builds a full chain for `theta` between `left` (complete to depth dmax)
    // and position `pos`; recursion halves the gap on any failure.
    It build_and_insert(List& lst, It left, It pos, double theta, int dmax, const R& t,
                        bool is_spine, int depth_guard = 0) {
        if (depth_guard > 48 || std::abs(theta - left->theta) < 1e-14)
            throw PrecisionExhausted("trace subdivision exhausted");
        spend();
        Ray r;
        r.theta = theta;
        r.val.reserve(dmax + 1);
        r.val.push_back(is_spine ? spine_offset(theta, t) : ring_offset(theta, t));
        for (int dd = 1; dd <= dmax; ++dd) {
            auto out = pull_offset(dd, r.val[dd - 1], left->val[dd]);
            if (out.status == PullStatus::Singular)
                throw SingularHit("trace target hit the singular value");
            bool ok = out.status == PullStatus::Ok &&
                      (is_spine || jump_ok(out.value, left->val[dd]));
            if (!ok) {
                left = build_and_insert(lst, left, pos, 0.5 * (left->theta + theta), dmax, t,
                                        is_spine, depth_guard + 1);
                --dd; // retry this depth with the refined left neighbor
                continue;
            }
            r.val.push_back(out.value);
        }
        return lst.insert(pos, std::move(r));
    }

    void advance_spine(int /*l*/, int d, const R& t) {
        auto it = spine_.begin();
        it->val.push_back(Cx<R>{scalar_from_double(0.0, bits_, model_),
                                scalar_from_double(0.0, bits_, model_)}); // s = 0 is the orbit
        auto left = it;
        ++it;
        for (; it != spine_.end(); ++it) {
            while (true) {
                auto out = pull_offset(d, it->val[d - 1], left->val[d]);
                if (out.status == PullStatus::Singular)
                    throw SingularHit("trace target hit the singular value");
                if (out.status == PullStatus::Ok) {
                    it->val.push_back(out.value);
                    break;
                }
                left = build_and_insert(spine_, left, it, 0.5 * (left->theta + it->theta), d, t,
                                        /*is_spine=*/true);
            }
            left = it;
        }
    }

    void advance_ring(int l, int d, const R& t) {
        auto it = rays_.begin();
        it->val.push_back(spine_.back().val[d]); // ray 0 = spine end
        auto left = it;
        ++it;
        for (; it != rays_.end(); ++it) {
            while (true) {
                auto out = pull_offset(d, it->val[d - 1], left->val[d]);
                if (out.status == PullStatus::Singular)
                    throw SingularHit("trace target hit the singular value");
                if (out.status == PullStatus::Ok && jump_ok(out.value, left->val[d])) {
                    it->val.push_back(out.value);
                    break;
                }
                left = build_and_insert(rays_, left, it, 0.5 * (left->theta + it->theta), d, t,
                                        /*is_spine=*/false);
            }
            left = it;
        }
        close_ring(l, d, t);
    }

    // Continuation around the full circle must come back to ray 0; a genuine
    // mismatch is branch monodromy, i.e. the singular value sits inside the
    // level above.
    void close_ring(int l, int d, const R& t) {
        while (true) {
            auto last = std::prev(rays_.end());
            auto first = rays_.begin();
            auto out = pull_offset(d, first->val[d - 1], last->val[d]);
            if (out.status == PullStatus::Singular)
                throw SingularHit("trace target hit the singular value");
            if (out.status == PullStatus::Ok && jump_ok(out.value, last->val[d])) {
                double gap = to_double(cx_dist(out.value, first->val[d]));
                double scale =
                    to_double(cx_abs(out.value)) + to_double(cx_abs(first->val[d])) + 1e-300;
                if (gap > 1e-6 * scale) throw SingularCrossed(l + 1);
                return;
            }
            build_and_insert(rays_, last, rays_.end(), 0.5 * (last->theta + 1.0), d, t,
                             /*is_spine=*/false);
        }
    }

    // Minimum distance from offset `q` to the level-l polyline, locally
    // refining the boundary near the closest approach so the measurement does
    // not depend on the sampling resolution.
    R refined_min_distance(const Cx<R>& q, int d, int /*l*/, const R& t, bool for_decision) {
        for (int pass = 0; pass < 200; ++pass) {
            It argmin_a = rays_.begin();
            R best{};
            bool have = false;
            R best_chord{};
            for (auto a = rays_.begin(); a != rays_.end(); ++a) {
                auto b = std::next(a);
                const Cx<R>& pb = (b == rays_.end()) ? rays_.begin()->val[d] : b->val[d];
                R dist = segment_distance(q, a->val[d], pb);
                if (!have || dist < best) {
                    have = true;
                    best = dist;
                    argmin_a = a;
                    best_chord = cx_dist(a->val[d], pb);
                }
            }
            double threshold = 0.05 * std::max(to_double(best), for_decision ? ctol_ : 0.0);
            double chord = to_double(best_chord);
            double scale = to_double(cx_abs(q)) + to_double(best) + 1e-300;
            if (chord <= threshold || chord <= 1e-13 * scale) return best;
            auto b = std::next(argmin_a);
            double right_theta = (b == rays_.end()) ? 1.0 : b->theta;
            if (right_theta - argmin_a->theta < 1e-14) return best;
            build_and_insert(rays_, argmin_a, b == rays_.end() ? rays_.end() : b,
                             0.5 * (argmin_a->theta + right_theta), d, t, /*is_spine=*/false);
        }
        throw PrecisionExhausted("boundary distance refinement did not settle");
    }

    bool crossed_at(int d, int l, const R& t) {
        Cx<R> q = sing_ - pts_[l];
        R dist = refined_min_distance(q, d, l, t, /*for_decision=*/true);
        if (to_double(dist) <= ctol_) return true;
        std::vector<Cx<R>> poly = ring_polyline(d);
        return winding_generic(poly, q) != 0;
    }

    static R segment_distance(const Cx<R>& p, const Cx<R>& a, const Cx<R>& b) {
        Cx<R> ab{b.re - a.re, b.im - a.im};
        Cx<R> ap{p.re - a.re, p.im - a.im};
        R len2 = ab.re * ab.re + ab.im * ab.im;
        if (!(to_double(len2) > 0.0)) return cx_abs(ap);
        R s = (ap.re * ab.re + ap.im * ab.im) / len2;
        double sd = to_double(s);
        if (sd <= 0.0) return cx_abs(ap);
        if (sd >= 1.0) return cx_dist(p, b);
        Cx<R> proj{a.re + s * ab.re, a.im + s * ab.im};
        return cx_dist(p, proj);
    }

  public:
    // Sunday's crossing-count winding number; counterclockwise is positive.
    static int winding_generic(const std::vector<Cx<R>>& poly, const Cx<R>& p) {
        int wind = 0;
        size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Cx<R>& a = poly[i];
            const Cx<R>& b = poly[(i + 1) % n];
            R cr = (b.re - a.re) * (p.im - a.im) - (b.im - a.im) * (p.re - a.re);
            double crd = to_double(cr);
            if (!(to_double(a.im) > to_double(p.im))) { // a.im <= p.im
                if (to_double(b.im) > to_double(p.im) && crd > 0.0) ++wind;
            } else {
                if (!(to_double(b.im) > to_double(p.im)) && crd < 0.0) --wind;
            }
        }
        return wind;
    }

  private:
    const MapSpec& map_;
    TelescopeOptions opt_;
    int bits_;
    double ctol_;
    R model_{};
    std::vector<Cx<R>> pts_;
    Cx<R> sing_{};
    int from_ = 0;
    List rays_;
    List spine_;
    std::vector<LevelCtx> ctx_;
    long budget_ = 0;
};

template <class R>
TelescopeResult compute_tau_impl(const MapSpec& map, const Orbit& orbit,
                                 const GeometryConstants& g, const TelescopeOptions& opt) {
    const int n = orbit.steps();
    const int bits = opt.precision_bits;
    double ctol = opt.containment_rel * g.delta_n;
    TraceEngine<R> engine(map, orbit, opt, ctol);

    R model = scalar_from_double(0.0, bits, R{});
    auto mk = [&](double x) { return scalar_from_double(x, bits, model); };

    std::vector<R> tau;
    tau.resize(n + 1, mk(0.0));
    tau[n] = mk(g.delta_n);
    R shrink = exp(mk(-g.m_max));
    R btol = mk(opt.bisect_tol);

    auto clean = [&](const R& t, int i) {
        return engine.trace(t, n, i + 1, /*check_final=*/true) < 0;
    };

    for (int i = n - 1; i >= 0; --i) {
        R hi = tau[i + 1];
        if (clean(hi, i)) {
            tau[i] = hi;
            continue;
        }
        R lo = hi * shrink;
        int expansions = 0;
        while (!clean(lo, i)) {
            lo = lo * shrink;
            if (++expansions > 400) throw PrecisionExhausted("tau bisection lower probe ran away");
            if (bits <= 53 && to_double(lo) < opt.underflow_guard)
                throw PrecisionExhausted(
                    "tau underflows double precision; retry with more mantissa bits");
        }
        while ((hi - lo) > btol * hi) {
            R mid = sqrt(lo * hi);
            if (clean(mid, i))
                lo = mid;
            else
                hi = mid;
        }
        tau[i] = lo;
        if (bits <= 53 && to_double(tau[i]) < opt.underflow_guard)
            throw PrecisionExhausted(
                "tau underflows double precision; retry with more mantissa bits");
    }

    TelescopeResult out;
    out.n = n;
    out.precision_bits = bits;
    out.tau.resize(n + 1);
    out.log_tau.resize(n + 1);
    out.m.resize(n);
    for (int i = 0; i <= n; ++i) {
        out.tau[i] = to_double(tau[i]);
        out.log_tau[i] = to_double(log(tau[i]));
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double mi = to_double(log(tau[i + 1] / tau[i]));
        if (mi < 0.0) mi = 0.0; // structural: tau is non-decreasing
        out.m[i] = mi;
        sum += mi;
    }
    out.sum_m = sum;

    // Koebe quarter-theorem consistency, using d(z_0, dU_0) <= M_f + |z_0|.
    double lhs = orbit.sum_log_deriv();
    double rhs = out.log_tau[0] - std::log(4.0 * (g.M_f + std::abs(orbit.z0)));
    out.koebe_log_margin = lhs - rhs;
    if (!(out.koebe_log_margin >= 0.0))
        throw Error("telescope failed the Koebe consistency check");
    return out;
}

} // namespace

std::vector<PullbackRegion> trace_pullback(const MapSpec& map, const Orbit& orbit, int from_level,
                                           int to_level, double radius, const TelescopeOptions& opt) {
    if (!(radius > 0.0)) throw DomainError("trace_pullback needs radius > 0");
    if (to_level < 0 || from_level > orbit.steps() || to_level >= from_level)
        throw DomainError("trace_pullback needs 0 <= to_level < from_level <= orbit length");
    double ctol = opt.containment_rel * radius;
    TraceEngine<double> engine(map, orbit, opt, ctol);
    std::map<int, std::vector<Cx<double>>> dump;
    int crossed = engine.trace(radius, from_level, to_level, /*check_final=*/true, &dump);
    if (crossed >= 0) throw SingularCrossed(crossed);
    std::vector<PullbackRegion> regions;
    for (int l = from_level; l >= to_level; --l) {
        PullbackRegion reg;
        reg.level = l;
        reg.center = orbit.z[l];
        for (const auto& v : dump[l]) reg.boundary.push_back(cx_to_std(v));
        regions.push_back(std::move(reg));
    }
    return regions;
}

TelescopeResult compute_tau(const MapSpec& map, const Orbit& orbit, const GeometryConstants& g,
                            const TelescopeOptions& opt) {
    if (orbit.status != OrbitStatus::Complete)
        throw DomainError("compute_tau needs a complete orbit");
    if (orbit.steps() < 1) throw DomainError("compute_tau needs n >= 1");
    if (opt.samples < 8) throw DomainError("compute_tau needs samples >= 8");
    if (!(opt.bisect_tol > 0.0)) throw DomainError("compute_tau needs bisect_tol > 0");
    if (opt.precision_bits < 24) throw DomainError("precision_bits must be >= 24");
    if (!(g.delta_n > 0.0)) throw DegenerateOrbit("delta_n = 0");
    if (opt.precision_bits <= 53) return compute_tau_impl<double>(map, orbit, g, opt);
    return compute_tau_impl<BigFloat>(map, orbit, g, opt);
}

double boundary_distance(const MapSpec& map, const Orbit& orbit, double radius, int to_level,
                         std::complex<double> point, const TelescopeOptions& opt) {
    if (!(radius > 0.0)) throw DomainError("boundary_distance needs radius > 0");
    const int n = orbit.steps();
    if (to_level < 0 || to_level >= n) throw DomainError("boundary_distance level out of range");
    double ctol = opt.containment_rel * radius;
    TraceEngine<double> engine(map, orbit, opt, ctol);
    Cx<double> p = cx_of(point);
    double dist = 0.0;
    int crossed = engine.trace(radius, n, to_level, /*check_final=*/false, nullptr, to_level, &p, &dist);
    if (crossed >= 0) throw SingularCrossed(crossed);
    return dist;
}

PullbackRegion trace_final_region(const MapSpec& map, const Orbit& orbit, double radius,
                                  int to_level, const TelescopeOptions& opt) {
    if (!(radius > 0.0)) throw DomainError("trace_final_region needs radius > 0");
    const int n = orbit.steps();
    if (to_level < 0 || to_level >= n) throw DomainError("trace_final_region level out of range");
    double ctol = opt.containment_rel * radius;
    TraceEngine<double> engine(map, orbit, opt, ctol);
    std::map<int, std::vector<Cx<double>>> dump;
    int crossed = engine.trace(radius, n, to_level, /*check_final=*/false, &dump);
    if (crossed >= 0) throw SingularCrossed(crossed);
    PullbackRegion reg;
    reg.level = to_level;
    reg.center = orbit.z[to_level];
    for (const auto& v : dump[to_level]) reg.boundary.push_back(cx_to_std(v));
    return reg;
}

// --- tail distribution -------------------------------------------------------

int TailDistribution::F(double m) const {
    if (m <= 0.0) return n;
    int count = 0;
    for (const auto& [v, mult] : sorted_m) {
        if (v >= m)
            count += mult;
        else
            break;
    }
    return count;
}

double TailDistribution::max_m() const { return sorted_m.empty() ? 0.0 : sorted_m.front().first; }

double TailDistribution::integral() const {
    // rectangle decomposition over the sorted breakpoints (Abel identity)
    double total = 0.0;
    int count = 0;
    double prev = 0.0;
    // iterate ascending: breakpoints from the smallest positive value up
    for (auto it = sorted_m.rbegin(); it != sorted_m.rend(); ++it) count += it->second;
    for (auto it = sorted_m.rbegin(); it != sorted_m.rend(); ++it) {
        total += count * (it->first - prev);
        prev = it->first;
        count -= it->second;
    }
    return total;
}

double TailDistribution::integral_over(double a, double b) const {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    for (const auto& [v, mult] : sorted_m) {
        double hi = std::min(v, b);
        if (hi > a) total += mult * (hi - a);
    }
    return total;
}

TailDistribution tail_from_values(const std::vector<double>& m_values) {
    TailDistribution t;
    t.n = (int)m_values.size();
    std::vector<double> pos;
    for (double v : m_values) {
        if (v < 0.0) throw DomainError("tail moduli must be non-negative");
        t.plain_sum += v;
        if (v > 0.0) pos.push_back(v);
    }
    std::sort(pos.begin(), pos.end(), std::greater<double>());
    for (double v : pos) {
        if (!t.sorted_m.empty() && t.sorted_m.back().first == v)
            t.sorted_m.back().second++;
        else
            t.sorted_m.emplace_back(v, 1);
    }
    return t;
}

TailDistribution tail_distribution(const TelescopeResult& tele) { return tail_from_values(tele.m); }

// --- emitters ----------------------------------------------------------------

std::string telescope_csv(const TelescopeResult& tele) {
    CsvWriter w;
    w.header({"i", "tau_i", "m_i"});
    for (int i = 0; i <= tele.n; ++i) {
        w.field((long long)i);
        w.field(tele.tau[i]);
        if (i < tele.n)
            w.field(tele.m[i]);
        else
            w.field_empty();
        w.end_row();
    }
    return w.str();
}

std::string tail_json(const TailDistribution& tail) {
    nlohmann::ordered_json j;
    j["n"] = tail.n;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [v, mult] : tail.sorted_m) arr.push_back({v, mult});
    j["sorted_m"] = arr;
    j["max_m"] = tail.max_m();
    j["integral"] = tail.integral();
    return j.dump(2) + "\n";
}

std::string regions_json(const std::vector<PullbackRegion>& regions) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& reg : regions) {
        nlohmann::ordered_json item;
        item["level"] = reg.level;
        item["center"] = {reg.center.real(), reg.center.imag()};
        auto b = nlohmann::ordered_json::array();
        for (const auto& p : reg.boundary) b.push_back({p.real(), p.imag()});
        item["boundary"] = b;
        arr.push_back(item);
    }
    return arr.dump() + "\n";
}

// --- polyline predicates -------------------------------------------------------

int winding_number(const std::vector<std::complex<double>>& poly, std::complex<double> p) {
    std::vector<Cx<double>> q;
    q.reserve(poly.size());
    for (auto z : poly) q.push_back(cx_of(z));
    return TraceEngine<double>::winding_generic(q, cx_of(p));
}

namespace {
int orient(std::complex<double> a, std::complex<double> b, std::complex<double> c) {
    double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
               (b.imag() - a.imag()) * (c.real() - a.real());
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}
bool on_segment(std::complex<double> a, std::complex<double> b, std::complex<double> p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}
bool segments_intersect(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                        std::complex<double> d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}
} // namespace

bool polylines_intersect(const std::vector<std::complex<double>>& a,
                         const std::vector<std::complex<double>>& b) {
    if (a.size() < 2 || b.size() < 2) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        auto a1 = a[i], a2 = a[(i + 1) % a.size()];
        for (size_t j = 0; j < b.size(); ++j) {
            if (segments_intersect(a1, a2, b[j], b[(j + 1) % b.size()])) return true;
        }
    }
    return false;
}

} // namespace lyatel

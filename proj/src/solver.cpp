#include "klauskit/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <unordered_map>

namespace klauskit {

namespace {

using cref = uint32_t;
constexpr cref kNoReason = UINT32_MAX;

// literals: 2v+0 positive, 2v+1 negative, v zero-based
inline uint32_t mk_lit(int v, bool neg) { return static_cast<uint32_t>(v) * 2 + (neg ? 1 : 0); }
inline uint32_t neg(uint32_t l) { return l ^ 1; }
inline int var_of(uint32_t l) { return static_cast<int>(l >> 1); }
inline bool sign_of(uint32_t l) { return l & 1; }

// max-heap on (activity, then lower index)
class order_heap {
public:
    void init(int nvars) {
        pos_.assign(nvars, -1);
        heap_.clear();
    }
    bool in_heap(int v) const { return pos_[v] >= 0; }
    bool empty() const { return heap_.empty(); }

    void insert(int v, const std::vector<double>& act) {
        if (in_heap(v)) return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(pos_[v], act);
    }
    int pop(const std::vector<double>& act) {
        int v = heap_[0];
        heap_[0] = heap_.back();
        pos_[heap_[0]] = 0;
        heap_.pop_back();
        pos_[v] = -1;
        if (!heap_.empty()) down(0, act);
        return v;
    }
    void increased(int v, const std::vector<double>& act) {
        if (in_heap(v)) up(pos_[v], act);
    }

private:
    bool before(int a, int b, const std::vector<double>& act) const {
        return act[a] > act[b] || (act[a] == act[b] && a < b);
    }
    void up(int i, const std::vector<double>& act) {
        int v = heap_[i];
        while (i > 0) {
            int p = (i - 1) >> 1;
            if (!before(v, heap_[p], act)) break;
            heap_[i] = heap_[p];
            pos_[heap_[i]] = i;
            i = p;
        }
        heap_[i] = v;
        pos_[v] = i;
    }
    void down(int i, const std::vector<double>& act) {
        int v = heap_[i];
        const int n = static_cast<int>(heap_.size());
        for (;;) {
            int c = 2 * i + 1;
            if (c >= n) break;
            if (c + 1 < n && before(heap_[c + 1], heap_[c], act)) ++c;
            if (!before(heap_[c], v, act)) break;
            heap_[i] = heap_[c];
            pos_[heap_[i]] = i;
            i = c;
        }
        heap_[i] = v;
        pos_[v] = i;
    }

    std::vector<int> heap_;
    std::vector<int> pos_;
};

struct watcher {
    cref ref;
    uint32_t blocker;
};

class cdcl {
public:
    cdcl(const cnf_formula& cnf, std::span<const assumption> assumptions,
         const solver_config& cfg)
        : cfg_(cfg), nv_(cnf.var_count) {
        assigns_.assign(nv_, -1);
        level_.assign(nv_, 0);
        reason_.assign(nv_, kNoReason);
        activity_.assign(nv_, 0.0);
        polarity_.assign(nv_, cfg.default_polarity ? 1 : 0);
        seen_.assign(nv_, 0);
        level_stamp_.assign(nv_ + 1, 0);
        watches_.assign(static_cast<size_t>(nv_) * 2, {});

        is_decision_.assign(nv_, cfg.decision_vars.empty() ? 1 : 0);
        for (int v : cfg.decision_vars) {
            if (v < 1 || v > nv_) throw error("decision variable out of range");
            is_decision_[v - 1] = 1;
        }
        heap_.init(nv_);
        for (int v = 0; v < nv_; ++v)
            if (is_decision_[v]) heap_.insert(v, activity_);

        for (const auto& clause : cnf.clauses)
            if (!add_clause(clause)) {
                ok_ = false;
                break;
            }

        // collapse duplicate assumptions, reject contradictory ones
        std::vector<int8_t> seen_assumption(nv_, -1);
        for (const auto& a : assumptions) {
            if (a.var < 1 || a.var > nv_)
                throw invalid_assumptions("assumption variable out of range");
            int8_t want = a.value ? 1 : 0;
            int8_t& prev = seen_assumption[a.var - 1];
            if (prev == -1) {
                prev = want;
                assumptions_.push_back(mk_lit(a.var - 1, !a.value));
            } else if (prev != want) {
                throw invalid_assumptions("variable " + std::to_string(a.var) +
                                          " assumed with both polarities");
            }
        }
    }

    sat_outcome run() {
        const auto t0 = std::chrono::steady_clock::now();
        sat_outcome out;
        out.status = search();
        out.stats = stats_;
        out.stats.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (out.status == sat_status::satisfiable) {
            out.model.assign(nv_ + 1, 0);
            for (int v = 0; v < nv_; ++v) out.model[v + 1] = assigns_[v];
        }
        return out;
    }

private:
    // ---- clause storage ---------------------------------------------------
    // arena layout: [size<<1 | learnt] ([activity:f32][lbd:u32] if learnt) [lits...]

    uint32_t clause_size(cref c) const { return arena_[c] >> 1; }
    bool clause_learnt(cref c) const { return arena_[c] & 1; }
    uint32_t header_words(cref c) const { return 1 + 2 * (arena_[c] & 1); }
    uint32_t* clause_lits(cref c) { return &arena_[c + header_words(c)]; }
    const uint32_t* clause_lits(cref c) const { return &arena_[c + header_words(c)]; }

    float clause_act(cref c) const {
        float f;
        std::memcpy(&f, &arena_[c + 1], sizeof(float));
        return f;
    }
    void set_clause_act(cref c, float f) { std::memcpy(&arena_[c + 1], &f, sizeof(float)); }
    uint32_t clause_lbd(cref c) const { return arena_[c + 2]; }
    void set_clause_lbd(cref c, uint32_t lbd) { arena_[c + 2] = lbd; }

    cref alloc_clause(const std::vector<uint32_t>& lits, bool learnt, uint32_t lbd) {
        cref c = static_cast<cref>(arena_.size());
        arena_.push_back(static_cast<uint32_t>(lits.size()) << 1 | (learnt ? 1 : 0));
        if (learnt) {
            arena_.push_back(0);
            arena_.push_back(lbd);
            set_clause_act(c, 0.0F);
        }
        arena_.insert(arena_.end(), lits.begin(), lits.end());
        return c;
    }

    void attach(cref c) {
        const uint32_t* lits = clause_lits(c);
        watches_[neg(lits[0])].push_back({c, lits[1]});
        watches_[neg(lits[1])].push_back({c, lits[0]});
    }

    // ---- assignment -------------------------------------------------------

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    int8_t value(uint32_t l) const {
        int8_t a = assigns_[var_of(l)];
        if (a < 0) return -1;
        return static_cast<int8_t>(a ^ static_cast<int8_t>(sign_of(l) ? 1 : 0));
    }

    void enqueue(uint32_t l, cref from) {
        int v = var_of(l);
        assigns_[v] = sign_of(l) ? 0 : 1;
        level_[v] = decision_level();
        reason_[v] = from;
        trail_.push_back(l);
    }

    void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }

    void cancel_until(int lvl) {
        if (decision_level() <= lvl) return;
        for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[lvl]; --i) {
            int v = var_of(trail_[i]);
            polarity_[v] = assigns_[v];
            assigns_[v] = -1;
            reason_[v] = kNoReason;
            if (is_decision_[v]) heap_.insert(v, activity_);
        }
        trail_.resize(trail_lim_[lvl]);
        trail_lim_.resize(lvl);
        qhead_ = static_cast<int>(trail_.size());
    }

    // false on an immediate top-level contradiction
    bool add_clause(const std::vector<int>& ext) {
        std::vector<uint32_t> lits;
        lits.reserve(ext.size());
        for (int el : ext) {
            if (el == 0 || std::abs(el) > nv_) throw error("literal out of range in clause");
            lits.push_back(mk_lit(std::abs(el) - 1, el < 0));
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (size_t i = 1; i < lits.size(); ++i)
            if (lits[i] == neg(lits[i - 1])) return true; // tautology, drop
        if (lits.empty()) return false;
        if (lits.size() == 1) {
            pending_units_.push_back(lits[0]);
            return true;
        }
        cref c = alloc_clause(lits, false, 0);
        originals_.push_back(c);
        attach(c);
        return true;
    }

    // ---- propagation ------------------------------------------------------

    cref propagate() {
        while (qhead_ < static_cast<int>(trail_.size())) {
            uint32_t p = trail_[qhead_++];
            ++stats_.propagations;
            auto& ws = watches_[p];
            size_t i = 0, j = 0;
            cref conflict = kNoReason;
            while (i < ws.size()) {
                watcher w = ws[i];
                if (value(w.blocker) == 1) {
                    ws[j++] = ws[i++];
                    continue;
                }
                uint32_t* lits = clause_lits(w.ref);
                const uint32_t false_lit = neg(p);
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                ++i;
                // lits[1] == false_lit now
                if (value(lits[0]) == 1) {
                    ws[j++] = {w.ref, lits[0]};
                    continue;
                }
                const uint32_t size = clause_size(w.ref);
                uint32_t k = 2;
                for (; k < size; ++k)
                    if (value(lits[k]) != 0) break;
                if (k < size) {
                    std::swap(lits[1], lits[k]);
                    watches_[neg(lits[1])].push_back({w.ref, lits[0]});
                    continue; // moved to another watch list
                }
                // unit or conflict
                ws[j++] = {w.ref, lits[0]};
                if (value(lits[0]) == 0) {
                    conflict = w.ref;
                    qhead_ = static_cast<int>(trail_.size());
                    while (i < ws.size()) ws[j++] = ws[i++];
                } else {
                    enqueue(lits[0], w.ref);
                }
            }
            ws.resize(j);
            if (conflict != kNoReason) return conflict;
        }
        return kNoReason;
    }

    // ---- activities -------------------------------------------------------

    void bump_var(int v) {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        heap_.increased(v, activity_);
    }
    void decay_var() { var_inc_ /= 0.95; }

    void bump_clause(cref c) {
        float a = clause_act(c) + static_cast<float>(cla_inc_);
        set_clause_act(c, a);
        if (a > 1e20F) {
            for (cref lc : learnts_) set_clause_act(lc, clause_act(lc) * 1e-20F);
            cla_inc_ *= 1e-20;
        }
    }
    void decay_clause() { cla_inc_ /= 0.999; }

    // distinct decision levels among the literals
    uint32_t compute_lbd(const uint32_t* lits, uint32_t size) {
        ++stamp_;
        uint32_t lbd = 0;
        for (uint32_t k = 0; k < size; ++k) {
            int lvl = level_[var_of(lits[k])];
            if (level_stamp_[lvl] != stamp_) {
                level_stamp_[lvl] = stamp_;
                ++lbd;
            }
        }
        return lbd;
    }

    // ---- conflict analysis --------------------------------------------------

    void analyze(cref confl, std::vector<uint32_t>& learnt, int& bt_level,
                 uint32_t& lbd_out) {
        learnt.clear();
        learnt.push_back(0); // placeholder for the asserting literal
        int path = 0;
        uint32_t p = UINT32_MAX;
        int index = static_cast<int>(trail_.size()) - 1;

        do {
            if (clause_learnt(confl)) {
                bump_clause(confl);
                // freshly observed shorter dependency: remember it
                uint32_t cur = compute_lbd(clause_lits(confl), clause_size(confl));
                if (cur < clause_lbd(confl)) set_clause_lbd(confl, cur);
            }
            const uint32_t* lits = clause_lits(confl);
            const uint32_t size = clause_size(confl);
            for (uint32_t k = (p == UINT32_MAX) ? 0 : 1; k < size; ++k) {
                int v = var_of(lits[k]);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_var(v);
                    if (level_[v] >= decision_level())
                        ++path;
                    else
                        learnt.push_back(lits[k]);
                }
            }
            while (!seen_[var_of(trail_[index])]) --index;
            p = trail_[index];
            confl = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --index;
            --path;
        } while (path > 0);
        learnt[0] = neg(p);
        to_clear_.assign(learnt.begin() + 1, learnt.end());

        // self-subsumption: drop literals whose whole reason is already seen
        size_t keep = 1;
        for (size_t k = 1; k < learnt.size(); ++k) {
            int v = var_of(learnt[k]);
            bool redundant = false;
            if (reason_[v] != kNoReason) {
                redundant = true;
                const uint32_t* rl = clause_lits(reason_[v]);
                const uint32_t rs = clause_size(reason_[v]);
                for (uint32_t m = 1; m < rs; ++m) {
                    int rv = var_of(rl[m]);
                    if (!seen_[rv] && level_[rv] > 0) {
                        redundant = false;
                        break;
                    }
                }
            }
            if (!redundant) learnt[keep++] = learnt[k];
        }
        learnt.resize(keep);

        if (learnt.size() == 1) {
            bt_level = 0;
        } else {
            size_t max_i = 1;
            for (size_t k = 2; k < learnt.size(); ++k)
                if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])]) max_i = k;
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[var_of(learnt[1])];
        }
        lbd_out = compute_lbd(learnt.data(), static_cast<uint32_t>(learnt.size()));
        for (uint32_t l : to_clear_) seen_[var_of(l)] = 0;
    }

    // ---- learnt clause database --------------------------------------------

    bool locked(cref c) const {
        const uint32_t l0 = clause_lits(c)[0];
        return reason_[var_of(l0)] == c && value(l0) == 1;
    }

    void reduce_db() {
        // worst first: high LBD, then low activity
        std::sort(learnts_.begin(), learnts_.end(), [this](cref a, cref b) {
            if (clause_lbd(a) != clause_lbd(b)) return clause_lbd(a) > clause_lbd(b);
            if (clause_act(a) != clause_act(b)) return clause_act(a) < clause_act(b);
            return a < b;
        });
        std::vector<cref> kept;
        kept.reserve(learnts_.size());
        const size_t target = learnts_.size() / 2;
        size_t removed = 0;
        for (cref c : learnts_) {
            if (removed < target && clause_lbd(c) > 2 && clause_size(c) > 2 && !locked(c)) {
                dead_.push_back(c);
                ++removed;
            } else {
                kept.push_back(c);
            }
        }
        learnts_.swap(kept);
        garbage_collect();
    }

    void garbage_collect() {
        std::vector<uint32_t> fresh;
        fresh.reserve(arena_.size());
        std::unordered_map<cref, cref> remap;
        auto move_clause = [&](cref c) {
            cref nc = static_cast<cref>(fresh.size());
            const uint32_t words = header_words(c) + clause_size(c);
            fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + words);
            remap[c] = nc;
            return nc;
        };
        for (cref& c : originals_) c = move_clause(c);
        for (cref& c : learnts_) c = move_clause(c);
        arena_.swap(fresh);
        dead_.clear();
        for (int v = 0; v < nv_; ++v)
            if (reason_[v] != kNoReason) reason_[v] = remap.at(reason_[v]);
        for (auto& wl : watches_) wl.clear();
        for (cref c : originals_) attach(c);
        for (cref c : learnts_) attach(c);
    }

    // ---- search -------------------------------------------------------------

    static double luby(double y, int x) {
        int size = 1, seq = 0;
        while (size < x + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        while (size - 1 != x) {
            size = (size - 1) >> 1;
            --seq;
            x = x % size;
        }
        return std::pow(y, seq);
    }

    bool out_of_time() const {
        if (cfg_.max_time_ms < 0) return false;
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count() >
               cfg_.max_time_ms;
    }

    sat_status search() {
        start_ = std::chrono::steady_clock::now();
        if (!ok_) return sat_status::unsatisfiable;
        for (uint32_t u : pending_units_) {
            if (value(u) == 0) return sat_status::unsatisfiable;
            if (value(u) == -1) enqueue(u, kNoReason);
        }
        if (propagate() != kNoReason) return sat_status::unsatisfiable;

        uint64_t next_reduce = 2000;
        uint64_t reductions = 0;
        std::vector<uint32_t> learnt;
        for (int restart = 0;; ++restart) {
            const int64_t budget =
                static_cast<int64_t>(luby(2.0, restart) * cfg_.restart_base);
            int64_t conflicts_here = 0;
            ++stats_.restarts;
            for (;;) {
                cref confl = propagate();
                if (confl != kNoReason) {
                    ++stats_.conflicts;
                    ++conflicts_here;
                    if (decision_level() == 0) return sat_status::unsatisfiable;
                    int bt = 0;
                    uint32_t lbd = 0;
                    analyze(confl, learnt, bt, lbd);
                    cancel_until(bt);
                    if (learnt.size() == 1) {
                        enqueue(learnt[0], kNoReason);
                    } else {
                        cref c = alloc_clause(learnt, true, lbd);
                        learnts_.push_back(c);
                        attach(c);
                        bump_clause(c);
                        enqueue(learnt[0], c);
                    }
                    decay_var();
                    decay_clause();
                    if (cfg_.max_conflicts >= 0 &&
                        stats_.conflicts >= static_cast<uint64_t>(cfg_.max_conflicts))
                        return sat_status::budget_exceeded;
                    if ((stats_.conflicts & 511) == 0 && out_of_time())
                        return sat_status::budget_exceeded;
                    if (stats_.conflicts >= next_reduce) {
                        ++reductions;
                        next_reduce = stats_.conflicts + 2000 + 300 * reductions;
                        reduce_db();
                    }
                } else {
                    if (conflicts_here >= budget) {
                        cancel_until(0);
                        break; // restart
                    }
                    uint32_t next = UINT32_MAX;
                    while (decision_level() < static_cast<int>(assumptions_.size())) {
                        uint32_t a = assumptions_[decision_level()];
                        if (value(a) == 1) {
                            new_decision_level(); // already holds; placeholder level
                        } else if (value(a) == 0) {
                            return sat_status::unsatisfiable; // conflicts with assumptions
                        } else {
                            next = a;
                            break;
                        }
                    }
                    if (next == UINT32_MAX) {
                        while (!heap_.empty()) {
                            int v = heap_.pop(activity_);
                            if (assigns_[v] < 0) {
                                next = mk_lit(v, polarity_[v] == 0);
                                break;
                            }
                        }
                        if (next == UINT32_MAX) {
                            // completeness guard: decide anything still open
                            // (a restricted decision set may not cover it)
                            for (int v = 0; v < nv_; ++v) {
                                if (assigns_[v] < 0) {
                                    next = mk_lit(v, polarity_[v] == 0);
                                    break;
                                }
                            }
                        }
                        if (next == UINT32_MAX) return sat_status::satisfiable;
                    }
                    ++stats_.decisions;
                    new_decision_level();
                    enqueue(next, kNoReason);
                }
            }
            if (out_of_time()) return sat_status::budget_exceeded;
        }
    }

    solver_config cfg_;
    int nv_;
    bool ok_ = true;

    std::vector<uint32_t> arena_;
    std::vector<cref> originals_;
    std::vector<cref> learnts_;
    std::vector<cref> dead_;
    std::vector<uint32_t> pending_units_;

    std::vector<std::vector<watcher>> watches_;
    std::vector<int8_t> assigns_;
    std::vector<int> level_;
    std::vector<cref> reason_;
    std::vector<uint32_t> trail_;
    std::vector<int> trail_lim_;
    int qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::vector<uint8_t> polarity_;
    std::vector<uint8_t> seen_;
    std::vector<uint64_t> level_stamp_;
    uint64_t stamp_ = 0;
    std::vector<uint32_t> to_clear_;
    std::vector<uint8_t> is_decision_;
    order_heap heap_;

    std::vector<uint32_t> assumptions_;
    solver_stats stats_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace

sat_outcome solve(const cnf_formula& cnf, std::span<const assumption> assumptions,
                  const solver_config& cfg) {
    cdcl solver(cnf, assumptions, cfg);
    return solver.run();
}

bool verify_model(const cnf_formula& cnf, std::span<const int8_t> model) {
    if (static_cast<int>(model.size()) < cnf.var_count + 1) return false;
    for (int v = 1; v <= cnf.var_count; ++v)
        if (model[v] != 0 && model[v] != 1) return false;
    for (const auto& clause : cnf.clauses) {
        bool sat = false;
        for (int lit : clause) {
            const int v = std::abs(lit);
            if (v < 1 || v > cnf.var_count) return false;
            if ((lit > 0 && model[v] == 1) || (lit < 0 && model[v] == 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

} // namespace klauskit

#include "nestlab/scan.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <map>
#include <thread>

#include "nestlab/exclusion.hpp"

namespace nestlab {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ScanRecord scan_one(double a, const PrecisionContext& ctx, const ScanBudgets& budgets) {
    auto t0 = std::chrono::steady_clock::now();
    ScanRecord rec;
    rec.a = a;
    try {
        QuadraticMap map(a, ctx);

        Classification cls = classify(map, budgets.classify_iters, budgets.period_budget, ctx.tol);
        rec.classification = to_string(cls.tag);
        rec.period = cls.period;
        if (cls.tag == Classification::Tag::RegularSink) rec.multiplier = cls.multiplier;
        rec.kappa = cls.kappa;

        CEReport ce = ce_exponent(map, budgets.ce_n);
        if (ce.critical_hit)
            rec.ce_critical_hit = *ce.critical_hit;
        else
            rec.ce_liminf = ce.liminf_proxy;

        RecurrenceReport rr = recurrence_exponent(map, budgets.rec_n, budgets.rec_alpha);
        if (rr.critical_hit)
            rec.rec_critical_hit = *rr.critical_hit;
        else
            rec.rec_exponent = rr.exponent_proxy;

        try {
            NestBudgets nb;
            nb.sweep = false; // targeted central descent only
            nb.max_s = 5000;
            nb.max_return_time = 50000;
            nb.word_depth = budgets.nest_depth;
            NestResult nest = build_nest(map, 0, budgets.nest_depth, 0.5, nb);
            rec.nest_depth_reached = static_cast<int>(nest.levels.size());
            rec.nest_outcome = to_string(nest.outcome);
            if (nest.levels.size() >= 2 && nest.levels[1].kind == LevelKind::Return &&
                nest.levels[1].s > 0) {
                rec.c_1 = nest.levels[1].c;
                rec.s_1 = nest.levels[1].s;
            }
        } catch (const NotInDelta&) {
            rec.nest_outcome = "NotInDelta";
        }
    } catch (const Error& e) {
        rec.classification = "Error";
        rec.nest_outcome = e.what();
    }

    rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rec;
}

} // namespace

ScanResult scan(double a_lo, double a_hi, int n_samples, const PrecisionContext& ctx,
                const ScanBudgets& budgets, int workers, uint64_t seed) {
    if (!(a_lo >= 0.5 && a_hi <= 2.0 && a_lo < a_hi)) throw DomainError("scan range must be inside [1/2, 2]");
    if (n_samples < 0) throw DomainError("n_samples must be >= 0");
    ScanResult res;
    res.a_lo = a_lo;
    res.a_hi = a_hi;
    res.seed = seed;
    res.bits = ctx.bits;

    std::vector<double> params(static_cast<size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i)
        params[static_cast<size_t>(i)] =
            a_lo + (a_hi - a_lo) * counter_uniform(seed, /*stream=*/0, static_cast<uint64_t>(i));
    std::sort(params.begin(), params.end());

    res.records.assign(params.size(), ScanRecord{});
    int nw = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            for (size_t i = static_cast<size_t>(w); i < params.size(); i += static_cast<size_t>(nw))
                res.records[i] = scan_one(params[i], ctx, budgets);
        });
    }
    for (auto& th : pool) th.join();
    return res;
}

std::string scan_csv(const ScanResult& res) {
    std::string out;
    out += "nestlab-csv-v1\n";
    out += "a,classification,period,multiplier,kappa,ce_liminf,ce_flag,rec_exponent,rec_flag,"
           "nest_depth,nest_outcome,c_1,s_1\n";
    std::map<std::string, long> fractions;
    for (const ScanRecord& r : res.records) {
        ++fractions[r.classification];
        out += fmt_double(r.a);
        out += ',' + r.classification;
        out += ',' + std::to_string(r.period);
        out += ',';
        if (r.multiplier) out += fmt_double(*r.multiplier);
        out += ',' + std::to_string(r.kappa);
        out += ',';
        if (r.ce_liminf) out += fmt_double(*r.ce_liminf);
        out += ',';
        if (r.ce_critical_hit) out += "hit:" + std::to_string(*r.ce_critical_hit);
        out += ',';
        if (r.rec_exponent) out += fmt_double(*r.rec_exponent);
        out += ',';
        if (r.rec_critical_hit) out += "hit:" + std::to_string(*r.rec_critical_hit);
        out += ',' + std::to_string(r.nest_depth_reached);
        out += ',' + r.nest_outcome;
        out += ',';
        if (r.c_1) out += fmt_double(*r.c_1);
        out += ',';
        if (r.s_1) out += std::to_string(*r.s_1);
        out += '\n';
    }
    out += "# summary";
    if (!res.records.empty()) {
        for (const auto& [tag, count] : fractions) {
            out += ' ' + tag + '=';
            out += fmt_double(static_cast<double>(count) / static_cast<double>(res.records.size()));
        }
    }
    out += '\n';
    return out;
}

nlohmann::json scan_json(const ScanResult& res) {
    nlohmann::json j;
    j["schema"] = "nestlab-scan-v1";
    j["a_lo"] = res.a_lo;
    j["a_hi"] = res.a_hi;
    j["seed"] = res.seed;
    j["bits"] = static_cast<long>(res.bits);
    nlohmann::json rows = nlohmann::json::array();
    for (const ScanRecord& r : res.records) {
        nlohmann::json row;
        row["a"] = r.a;
        row["classification"] = r.classification;
        row["period"] = r.period;
        if (r.multiplier) row["multiplier"] = *r.multiplier;
        row["kappa"] = r.kappa;
        if (r.ce_liminf) row["ce_liminf"] = *r.ce_liminf;
        if (r.ce_critical_hit) row["ce_critical_hit"] = *r.ce_critical_hit;
        if (r.rec_exponent) row["rec_exponent"] = *r.rec_exponent;
        if (r.rec_critical_hit) row["rec_critical_hit"] = *r.rec_critical_hit;
        row["nest_depth"] = r.nest_depth_reached;
        row["nest_outcome"] = r.nest_outcome;
        if (r.c_1) row["c_1"] = *r.c_1;
        if (r.s_1) row["s_1"] = *r.s_1;
        row["runtime_ms"] = r.runtime_ms;
        rows.push_back(std::move(row));
    }
    j["records"] = std::move(rows);
    return j;
}

} // namespace nestlab

#include "dilation/measure.hpp"

#include "dilation/parallel.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace dilation {

CoefficientMask::CoefficientMask(Dilation dilation, int field_d, WeightMap coeffs)
    : dilation_(dilation), field_d_(field_d) {
    validate_field_parameter(field_d_);
    QuadScalar sum;
    for (auto& [k, p] : coeffs) {
        if (dilation_.is_line() && k.im != 0)
            throw std::invalid_argument("line mask has a plane key " + lattice_to_string(DilationKind::TwinDragonPlane, k));
        if (!p.is_rational() && p.field() != field_d_)
            throw FieldMismatch("mask coefficient lives in a different field than field_d");
        if (p.is_zero()) continue;
        sum += p;
        coeffs_.emplace(k, p);
    }
    if (coeffs_.empty()) throw std::invalid_argument("mask support is empty");
    if (!(sum == QuadScalar(1))) throw std::invalid_argument("mask coefficients must sum to 1");
}

std::int64_t CoefficientMask::max_norm_sq() const {
    std::int64_t best = 0;
    for (auto& [k, p] : coeffs_) best = std::max(best, k.norm_sq());
    return best;
}

std::int64_t CoefficientMask::diameter_sq() const {
    std::int64_t best = 0;
    for (auto& [k, p] : coeffs_)
        for (auto& [k2, p2] : coeffs_) best = std::max(best, (k - k2).norm_sq());
    return best;
}

CoefficientMask CoefficientMask::from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::string dil = j.at("dilation").get<std::string>();
    Dilation dilation;
    if (dil == "line")
        dilation.kind = DilationKind::DyadicLine;
    else if (dil == "plane")
        dilation.kind = DilationKind::TwinDragonPlane;
    else
        throw std::invalid_argument("mask dilation must be \"line\" or \"plane\"");
    int field_d = j.at("field_d").get<int>();
    WeightMap coeffs;
    for (auto& entry : j.at("coeffs")) {
        LatticeElem k = lattice_parse(dilation.kind, entry.at("k").get<std::string>());
        QuadScalar p = QuadScalar::parse(entry.at("p").get<std::string>());
        if (coeffs.count(k)) throw std::invalid_argument("duplicate mask key");
        coeffs.emplace(k, p);
    }
    return CoefficientMask(dilation, field_d, std::move(coeffs));
}

std::string CoefficientMask::to_json() const {
    nlohmann::json j;
    j["dilation"] = dilation_.is_line() ? "line" : "plane";
    j["field_d"] = field_d_;
    j["coeffs"] = nlohmann::json::array();
    for (auto& [k, p] : coeffs_) {
        j["coeffs"].push_back({{"k", lattice_to_string(kind(), k)}, {"p", p.to_string()}});
    }
    return j.dump(2);
}

CoefficientMask CoefficientMask::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mask file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void DiscreteMeasure::insert_add(LatticeElem g, const QuadScalar& w) {
    auto [it, fresh] = weights.emplace(g, w);
    if (!fresh) it->second += w;
}

void DiscreteMeasure::prune_zeros() {
    for (auto it = weights.begin(); it != weights.end();) {
        if (it->second.is_zero())
            it = weights.erase(it);
        else
            ++it;
    }
}

DiscreteMeasure mask_mu1(const CoefficientMask& mask) {
    DiscreteMeasure mu{mask.dilation(), 1, mask.coeffs()};
    return mu;
}

DiscreteMeasure pushforward_D(const DiscreteMeasure& mu) {
    DiscreteMeasure out = mu;
    out.scale += 1;
    return out;
}

namespace {

LatticeElem scale_key(DilationKind kind, LatticeElem g, unsigned steps) {
    for (unsigned i = 0; i < steps; ++i) g = mul_M(kind, g);
    return g;
}

}  // namespace

DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, unsigned workers) {
    if (mu.dilation.kind != nu.dilation.kind)
        throw std::invalid_argument("convolve: operands have different dilations");
    unsigned scale = std::max(mu.scale, nu.scale);
    DilationKind kind = mu.dilation.kind;

    std::vector<std::pair<LatticeElem, QuadScalar>> left, right;
    left.reserve(mu.weights.size());
    right.reserve(nu.weights.size());
    for (auto& [g, w] : mu.weights) left.emplace_back(scale_key(kind, g, scale - mu.scale), w);
    for (auto& [g, w] : nu.weights) right.emplace_back(scale_key(kind, g, scale - nu.scale), w);

    std::vector<WeightMap> parts = parallel_map_chunks<std::pair<LatticeElem, QuadScalar>, WeightMap>(
        left, workers, [&](auto begin, auto end) {
            WeightMap acc;
            for (auto it = begin; it != end; ++it)
                for (auto& [h, v] : right) {
                    LatticeElem z = it->first + h;
                    auto [slot, fresh] = acc.emplace(z, it->second * v);
                    if (!fresh) slot->second += it->second * v;
                }
            return acc;
        });

    DiscreteMeasure out{mu.dilation, scale, {}};
    for (auto& part : parts)
        for (auto& [g, w] : part) out.insert_add(g, w);
    out.prune_zeros();
    return out;
}

QuadScalar total_mass(const DiscreteMeasure& mu) {
    QuadScalar sum;
    for (auto& [g, w] : mu.weights) sum += w;
    return sum;
}

QuadScalar tv_norm(const DiscreteMeasure& mu) {
    QuadScalar sum;
    for (auto& [g, w] : mu.weights) sum += w.abs();
    return sum;
}

ProbabilityReport check_probability(const CoefficientMask& mask) {
    ProbabilityReport report;
    report.all_nonneg = true;
    for (auto& [k, p] : mask.coeffs()) {
        if (p.sign() < 0) report.all_nonneg = false;
        if (parity(mask.kind(), k) == Parity::Even)
            report.even_sum += p;
        else
            report.odd_sum += p;
    }
    QuadScalar half(1, 2);
    report.absolutely_continuous_criterion =
        report.all_nonneg && report.even_sum == half && report.odd_sum == half;
    return report;
}

OrthonormalityReport check_orthonormality(const CoefficientMask& mask) {
    OrthonormalityReport report;
    report.pass = true;
    std::int64_t diam_sq = mask.diameter_sq();
    // Shifts i with |Mi|^2 <= diam^2; beyond that the supports of p_k and
    // p_{k+Mi} are disjoint and the sum is structurally zero.
    std::int64_t bound_sq = diam_sq / mask.dilation().norm_m_sq();
    std::int64_t box = 0;
    while (box * box <= bound_sq) ++box;

    std::vector<LatticeElem> shifts;
    if (mask.dilation().is_line()) {
        for (std::int64_t x = -box; x <= box; ++x)
            if (4 * x * x <= diam_sq) shifts.push_back({x, 0});
    } else {
        for (std::int64_t x = -box; x <= box; ++x)
            for (std::int64_t y = -box; y <= box; ++y)
                if (2 * (x * x + y * y) <= diam_sq) shifts.push_back({x, y});
    }

    QuadScalar half(1, 2);
    for (LatticeElem shift : shifts) {
        LatticeElem m_shift = mul_M(mask.kind(), shift);
        QuadScalar sum;
        for (auto& [k, p] : mask.coeffs()) {
            auto other = mask.coeffs().find(k + m_shift);
            if (other != mask.coeffs().end()) sum += p * other->second;
        }
        bool zero_shift = shift == LatticeElem{0, 0};
        if (zero_shift ? !(sum == half) : !sum.is_zero()) report.pass = false;
        report.sums.push_back({shift, sum});
    }
    return report;
}

std::string measure_to_text(const DiscreteMeasure& mu) {
    std::ostringstream out;
    for (auto& [g, w] : mu.weights)
        out << lattice_to_string(mu.dilation.kind, g) << "," << w.to_string() << "\n";
    return out.str();
}

DiscreteMeasure measure_from_text(Dilation dilation, unsigned scale, const std::string& text) {
    DiscreteMeasure mu{dilation, scale, {}};
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("measure dump line lacks a comma");
        LatticeElem g = lattice_parse(dilation.kind, line.substr(0, comma));
        QuadScalar w = QuadScalar::parse(line.substr(comma + 1));
        if (!w.is_zero()) mu.insert_add(g, w);
    }
    return mu;
}

}  // namespace dilation

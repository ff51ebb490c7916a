// TOML model loading and JSON / terminal report rendering.

#include "frobsurf/model_io.hpp"

#include <sstream>

#include "json.hpp"

namespace frobsurf {

namespace {

using nlohmann::json;

bool small_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::vector<uint32_t> parse_coords(const toml::Value& arr, const Fq& F) {
    std::vector<uint32_t> out;
    for (const std::string& s : arr.as_string_array()) out.push_back(F.parse(s));
    return out;
}

std::string yesno(const std::optional<bool>& v) {
    if (!v) return "undecided";
    return *v ? "yes" : "no";
}

json optional_bool(const std::optional<bool>& v) {
    if (!v) return nullptr;
    return *v;
}

json scan_json(const ScanReport& s) {
    json j;
    j["kmax_requested"] = s.kmax_requested;
    j["k_checked"] = s.k_checked;
    j["budget_capped"] = s.budget_capped;
    j["points_on_x"] = s.points_on_x;
    j["singular_count"] = s.singular_count;
    j["singular_points"] = s.singular_points;
    return j;
}

json certificate_json(const BoundaryCertificate& c) {
    json pieces = json::array();
    for (const CertificatePiece& pc : c.pieces) {
        json pj;
        pj["role"] = pc.role;
        pj["nodes"] = pc.nodes;
        pj["form"] = pc.form;
        pieces.push_back(pj);
    }
    json j;
    j["field"] = field_label(c.p, c.k);
    j["rounds"] = c.rounds_used;
    j["pair_coefficient"] = c.pair_coeff;
    j["discrepancies"] = c.profile;
    j["pieces"] = pieces;
    return j;
}

}  // namespace

std::string field_label(uint32_t p, int k) {
    std::string s = "F_" + std::to_string(p);
    if (k > 1) s += "^" + std::to_string(k);
    return s;
}

SurfaceModel model_from_toml(const toml::Value& root) {
    SurfaceModel m;
    if (const toml::Value* v = root.find("name")) m.name = v->as_string();
    const std::string& kind = root.at("kind").as_string();
    long long p = root.at("p").as_integer();
    if (!small_prime(p) || p > 97)
        throw ParseError("characteristic must be a prime at most 97, got " + std::to_string(p));
    long long k = 1;
    if (const toml::Value* v = root.find("k")) k = v->as_integer();
    if (k < 1 || k > 4) throw ParseError("field extension degree must be 1..4");
    Fq F = k == 1 ? Fq::prime((uint32_t)p) : Fq::ext((uint32_t)p, (int)k);

    if (kind == "hypersurface" || kind == "complete_intersection") {
        m.kind = kind == "hypersurface" ? ModelKind::Hypersurface
                                        : ModelKind::CompleteIntersection;
        long long K2 = root.at("K2").as_integer();
        if (K2 < 1 || K2 > 4)
            throw ParseError("equation models cover K2 = 1..4, got " + std::to_string(K2));
        m.K2 = (int)K2;
        const Ambient& amb = Ambient::by_name(equation_ambient(m.K2));
        for (const std::string& text : root.at("forms").as_string_array())
            m.forms.push_back(Poly::parse(amb, F, text));
        if (m.forms.empty()) throw ParseError("empty forms array");
        return m;
    }
    if (kind == "blowup") {
        m.kind = ModelKind::Blowup;
        PointTree t;
        t.F = F;
        t.base = root.at("base").as_string();
        if (t.base != "P2" && t.base != "P1xP1")
            throw ParseError("base must be \"P2\" or \"P1xP1\", got \"" + t.base + "\"");
        const toml::Value* nodes = root.find("node");
        if (!nodes || !nodes->is_array() || nodes->items.empty())
            throw ParseError("blowup model needs at least one [[node]] block");
        for (const auto& np : nodes->as_array()) {
            const toml::Value& nt = *np;
            TreeNode nd;
            if (const toml::Value* pv = nt.find("parent")) {
                if (nt.find("point"))
                    throw ParseError("line " + std::to_string(nt.line) +
                                     ": a node has either point coordinates or a parent, not both");
                nd.parent = (int)pv->as_integer() - 1;  // files are 1-based
                std::vector<uint32_t> d = parse_coords(nt.at("dir"), F);
                if (d.size() != 2)
                    throw ParseError("line " + std::to_string(nt.line) +
                                     ": dir needs exactly two coordinates");
                nd.dir = {d[0], d[1]};
            } else {
                nd.point = parse_coords(nt.at("point"), F);
            }
            t.nodes.push_back(nd);
        }
        if (const toml::Value* v = root.find("K2")) {
            if (v->as_integer() != t.K2())
                throw ParseError("declared K2 = " + std::to_string(v->as_integer()) +
                                 " does not match the " + std::to_string(t.n()) +
                                 "-node tree (K2 = " + std::to_string(t.K2()) + ")");
        }
        m.K2 = t.K2();
        m.tree = std::move(t);
        return m;
    }
    throw ParseError("unknown model kind \"" + kind +
                     "\" (hypersurface, complete_intersection or blowup)");
}

SurfaceModel model_from_text(const std::string& text) {
    toml::Value root = toml::parse(text);
    return model_from_toml(root);
}

SurfaceModel model_from_file(const std::string& path) {
    toml::Value root = toml::parse_file(path);
    return model_from_toml(root);
}

std::string canonical_model_string(const SurfaceModel& m) {
    std::string s;
    switch (m.kind) {
        case ModelKind::Hypersurface: s = "hypersurface"; break;
        case ModelKind::CompleteIntersection: s = "complete_intersection"; break;
        case ModelKind::Blowup: s = "blowup"; break;
    }
    const Fq& F = m.field();
    s += "|p=" + std::to_string(F.p()) + "^" + std::to_string(F.k());
    s += "|K2=" + std::to_string(m.K2);
    if (m.kind == ModelKind::Blowup) {
        s += "|" + m.tree->canonical_string();
    } else {
        for (const Poly& f : m.forms) s += "|" + f.str();
    }
    return s;
}

uint64_t model_hash(const SurfaceModel& m) { return fnv1a(canonical_model_string(m)); }

std::string certificate_json_text(const BoundaryCertificate& c) {
    return certificate_json(c).dump(2) + "\n";
}

std::string check_report_json(const SurfaceModel& m, const CheckReport& rep,
                              bool include_timings) {
    json j;
    j["schema"] = "frobsurf-report/1";
    j["model_hash"] = hex64(model_hash(m));
    j["name"] = m.name;
    j["kind"] = rep.kind;
    j["p"] = rep.p;
    j["field_degree"] = rep.field_k;
    j["K2"] = rep.K2;
    j["f_pure"] = optional_bool(rep.f_pure);
    j["f_split"] = optional_bool(rep.f_split);
    j["witness"] = rep.witness;
    {
        json g;
        g["status"] = rep.gfr;
        g["level"] = rep.gfr_level;
        g["note"] = rep.gfr_note;
        if (!rep.gfr_test_element.empty()) g["test_element"] = rep.gfr_test_element;
        if (!rep.gfr_witness.empty()) g["witness"] = rep.gfr_witness;
        j["gfr"] = g;
    }
    j["singularities"] = rep.singularities;
    if (rep.kind != "blowup") j["scan"] = scan_json(rep.scan);
    if (rep.certificate) j["certificate"] = certificate_json(*rep.certificate);
    if (include_timings) {
        json t;
        for (const auto& [label, sec] : rep.timings) t[label] = sec;
        j["timings"] = t;
    }
    return j.dump(2) + "\n";
}

std::string sample_summary_json(const SampleSummary& s, uint64_t seed,
                                const std::string& note) {
    json j;
    j["schema"] = "frobsurf-sample/1";
    j["K2"] = s.K2;
    j["p"] = s.p;
    j["field_degree"] = s.field_k;
    j["seed"] = seed;
    j["requested"] = s.requested;
    j["screened"] = s.screened;
    j["attempts"] = s.attempts;
    j["attempt_budget_hit"] = s.attempt_budget_hit;
    j["f_split"] = s.fsplit;
    j["not_f_split"] = s.nonsplit;
    if (s.K2 >= 5) j["certified"] = s.certified;
    j["counterexamples"] = s.counterexamples;
    if (s.sentinel_included) {
        json sj;
        sj["name"] = s.sentinel_name;
        sj["f_split"] = optional_bool(s.sentinel_fsplit);
        j["sentinel"] = sj;
    } else {
        j["sentinel"] = nullptr;
    }
    if (!note.empty()) j["note"] = note;
    return j.dump(2) + "\n";
}

std::string check_report_text(const SurfaceModel& m, const CheckReport& rep) {
    std::ostringstream os;
    os << "model " << (m.name.empty() ? "(unnamed)" : m.name) << " (" << rep.kind
       << ", K^2 = " << rep.K2 << ") over " << field_label(rep.p, rep.field_k) << "\n";
    os << "  model hash:    " << hex64(model_hash(m)) << "\n";
    os << "  F-pure:        " << yesno(rep.f_pure) << "\n";
    os << "  F-split:       " << yesno(rep.f_split);
    if (!rep.witness.empty()) os << "   witness " << rep.witness;
    os << "\n";
    os << "  singularities: " << rep.singularities << "\n";
    os << "  F-regular:     " << rep.gfr;
    if (rep.gfr_level > 0) os << " (level " << rep.gfr_level << ")";
    os << "\n                 " << rep.gfr_note << "\n";
    if (!rep.gfr_test_element.empty())
        os << "                 test element " << rep.gfr_test_element << ", witness "
           << rep.gfr_witness << "\n";
    if (rep.certificate) {
        const BoundaryCertificate& c = *rep.certificate;
        os << "  certificate:   " << c.pieces.size() << " boundary piece(s) over "
           << field_label(c.p, c.k) << ", pair coefficient " << c.pair_coeff << "\n";
        for (const CertificatePiece& pc : c.pieces) {
            os << "                 - " << pc.role;
            if (!pc.nodes.empty()) {
                os << " [nodes";
                for (int nd : pc.nodes) os << " " << nd;
                os << "]";
            }
            os << "  " << pc.form << "\n";
        }
        os << "                 discrepancies:";
        for (long a : c.profile) os << " " << a;
        os << "\n";
    }
    for (const auto& [label, sec] : rep.timings) {
        std::ostringstream t;
        t.setf(std::ios::fixed);
        t.precision(3);
        t << sec;
        os << "  time " << label << ": " << t.str() << "s\n";
    }
    return os.str();
}

std::string sample_summary_text(const SampleSummary& s) {
    std::ostringstream os;
    os << "cell K^2 = " << s.K2 << ", " << field_label(s.p, s.field_k) << ": " << s.screened
       << "/" << s.requested << " screened model(s) from " << s.attempts << " draw(s)";
    if (s.attempt_budget_hit) os << " [attempt budget hit]";
    os << "\n";
    if (s.K2 >= 5) {
        os << "  boundary certificates: " << s.certified << "/" << s.screened << "\n";
    } else {
        os << "  F-split: " << s.fsplit << "   not F-split: " << s.nonsplit << "\n";
    }
    for (const std::string& c : s.counterexamples)
        os << "  counterexample: " << c << "\n";
    if (s.sentinel_included)
        os << "  sentinel " << s.sentinel_name << ": "
           << (s.sentinel_fsplit && *s.sentinel_fsplit ? "F-split" : "not F-split")
           << " (fixed model, not screened)\n";
    return os.str();
}

}  // namespace frobsurf

#include "navsim/hydro_params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "navsim/errors.hpp"
#include "navsim/geometry.hpp"

namespace navsim {
namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& block, const std::string& key) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw MissingCoefficientError(block + "." + key);
    }
    return obj[key].get<double>();
}

void reject_unknown(const json& obj, const std::string& block,
                    const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw UnknownKeyError(block.empty() ? item.key() : block + "." + item.key());
        }
    }
}

}  // namespace

void HydroParams::check() const {
    if (length <= 0.0) throw InputError("vessel.length_m must be positive");
    if (design_speed <= 0.0) throw InputError("vessel.design_speed_mps must be positive");
    if (mass <= 0.0) throw InputError("mass.m must be positive");
    if (izz + jzz <= 0.0) throw SingularMassMatrixError();
    if (mass + mx <= 0.0) throw SingularMassMatrixError();
    const double det = (mass + my) * (izz + jzz) - (xg * mass) * (xg * mass);
    if (det <= 0.0) throw SingularMassMatrixError();
    if (propeller.k0 <= 0.0) throw InputError("propeller.k0 must be positive (bollard thrust)");
    if (rudder.slew_rate <= 0.0) throw InputError("rudder.max_slew_deg_per_time must be positive");
    // Action extremes are +/-35 deg; the rudder must admit them.
    if (std::abs(rudder.max_deflection - deg2rad(35.0)) > 1e-9) {
        throw InputError("rudder.max_deflection_deg must be 35");
    }
}

HydroParams load_hydro_params(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("parameters file is not valid JSON: ") + e.what());
    }

    reject_unknown(doc, "", {"schema_version", "name", "vessel", "mass", "hull",
                             "propeller", "rudder"});
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1) {
        throw InputError("parameters file: schema_version must be 1");
    }
    for (const char* block : {"vessel", "mass", "hull", "propeller", "rudder"}) {
        if (!doc.contains(block)) throw MissingCoefficientError(block);
    }

    HydroParams p;
    p.name = doc.value("name", "unnamed");

    const json& vessel = doc["vessel"];
    reject_unknown(vessel, "vessel", {"length_m", "design_speed_mps"});
    p.length = require_number(vessel, "vessel", "length_m");
    p.design_speed = require_number(vessel, "vessel", "design_speed_mps");

    const json& mass = doc["mass"];
    reject_unknown(mass, "mass", {"m", "mx", "my", "izz", "jzz", "xg"});
    p.mass = require_number(mass, "mass", "m");
    p.mx = require_number(mass, "mass", "mx");
    p.my = require_number(mass, "mass", "my");
    p.izz = require_number(mass, "mass", "izz");
    p.jzz = require_number(mass, "mass", "jzz");
    p.xg = require_number(mass, "mass", "xg");

    const json& hull = doc["hull"];
    reject_unknown(hull, "hull",
                   {"R0", "Xvv", "Xvr", "Xrr", "Xvvvv", "Yv", "Yr", "Yvvv", "Yvvr",
                    "Yvrr", "Yrrr", "Nv", "Nr", "Nvvv", "Nvvr", "Nvrr", "Nrrr"});
    HullDerivatives& h = p.hull;
    h.R0 = require_number(hull, "hull", "R0");
    h.Xvv = require_number(hull, "hull", "Xvv");
    h.Xvr = require_number(hull, "hull", "Xvr");
    h.Xrr = require_number(hull, "hull", "Xrr");
    h.Xvvvv = require_number(hull, "hull", "Xvvvv");
    h.Yv = require_number(hull, "hull", "Yv");
    h.Yr = require_number(hull, "hull", "Yr");
    h.Yvvv = require_number(hull, "hull", "Yvvv");
    h.Yvvr = require_number(hull, "hull", "Yvvr");
    h.Yvrr = require_number(hull, "hull", "Yvrr");
    h.Yrrr = require_number(hull, "hull", "Yrrr");
    h.Nv = require_number(hull, "hull", "Nv");
    h.Nr = require_number(hull, "hull", "Nr");
    h.Nvvv = require_number(hull, "hull", "Nvvv");
    h.Nvvr = require_number(hull, "hull", "Nvvr");
    h.Nvrr = require_number(hull, "hull", "Nvrr");
    h.Nrrr = require_number(hull, "hull", "Nrrr");

    const json& prop = doc["propeller"];
    reject_unknown(prop, "propeller", {"diameter", "t_p", "w_p", "k0", "k1", "k2"});
    p.propeller.diameter = require_number(prop, "propeller", "diameter");
    p.propeller.t_p = require_number(prop, "propeller", "t_p");
    p.propeller.w_p = require_number(prop, "propeller", "w_p");
    p.propeller.k0 = require_number(prop, "propeller", "k0");
    p.propeller.k1 = require_number(prop, "propeller", "k1");
    p.propeller.k2 = require_number(prop, "propeller", "k2");

    const json& rud = doc["rudder"];
    reject_unknown(rud, "rudder",
                   {"area", "aspect_ratio", "t_R", "a_H", "x_H", "x_R", "epsilon",
                    "kappa", "gamma_R", "l_R", "eta", "max_deflection_deg",
                    "max_slew_deg_per_time"});
    RudderParams& r = p.rudder;
    r.area = require_number(rud, "rudder", "area");
    r.aspect_ratio = require_number(rud, "rudder", "aspect_ratio");
    r.t_R = require_number(rud, "rudder", "t_R");
    r.a_H = require_number(rud, "rudder", "a_H");
    r.x_H = require_number(rud, "rudder", "x_H");
    r.x_R = require_number(rud, "rudder", "x_R");
    r.epsilon = require_number(rud, "rudder", "epsilon");
    r.kappa = require_number(rud, "rudder", "kappa");
    r.gamma_R = require_number(rud, "rudder", "gamma_R");
    r.l_R = require_number(rud, "rudder", "l_R");
    r.eta = require_number(rud, "rudder", "eta");
    // Angles are degrees in files, radians internally.
    r.max_deflection = deg2rad(require_number(rud, "rudder", "max_deflection_deg"));
    r.slew_rate = deg2rad(require_number(rud, "rudder", "max_slew_deg_per_time"));

    p.check();
    return p;
}

HydroParams load_hydro_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open parameters file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_hydro_params(buf.str());
}

}  // namespace navsim

#pragma once

// JSON forms of curves, verdicts and experiment reports. Every 64-bit
// integer is written as a decimal string; small counts stay numbers.

#include <json.hpp>

#include "ecarm/carmichael.hpp"
#include "ecarm/census.hpp"
#include "ecarm/classnum.hpp"
#include "ecarm/intervals.hpp"

namespace ecarm::io {

using json = nlohmann::ordered_json;

json curve_json(const curves::WeierstrassCurve& curve);
curves::WeierstrassCurve curve_from_json(const json& j);

json curve_mod_n_json(const curves::CurveModN& curve);
curves::CurveModN curve_mod_n_from_json(const json& j);

json verdict_json(const carmichael::CarmichaelVerdict& v);
carmichael::CarmichaelVerdict verdict_from_json(const json& j);

json estimate_json(const census::ProbabilityEstimate& e);
json profile_json(const census::StructuralProfile& s);
json trichotomy_json(const census::TrichotomyReport& r);
json decay_json(const census::DecaySweep& s);
json joint_json(const census::JointSweep& s);
json deuring_json(const classnum::DeuringReport& r);
json interval_json(const intervals::IntervalCountReport& r);

std::string rational_text(const classnum::Rational& r);

}  // namespace ecarm::io

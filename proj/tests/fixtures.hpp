#pragma once

#include <string>

#include "bac/core.hpp"
#include "bac/serde.hpp"

namespace fx {

inline bac::Node n(const std::string& text) { return bac::parse(text); }

inline const std::string kEmpty = "[]";
inline const std::string kPt = "[{0->1} []]";
inline const std::string kTwo = "[{0->1} [],{0->2} []]";
inline const std::string kNseg = "[{0->1} [],{0->2} []]";
inline const std::string kSeg = "[{0->1,1->2,2->3} " + kNseg + "]";
inline const std::string kCirc = "[{0->1,1->2,2->2} " + kNseg + "]";
inline const std::string kPp2 = "[{0->1,1->2} [{0->1} []],{0->2} []]";
inline const std::string kVee = "[{0->1,1->3,2->4} " + kNseg + ",{0->2,1->3,2->5} " + kNseg + "]";
inline const std::string kTsd = "[{0->1,1->3,2->4} " + kNseg + ",{0->2,1->6,2->5} " + kNseg + "]";

inline bac::Node empty() { return n(kEmpty); }
inline bac::Node pt() { return n(kPt); }
inline bac::Node two() { return n(kTwo); }
inline bac::Node nseg() { return n(kNseg); }
inline bac::Node seg() { return n(kSeg); }
inline bac::Node circ() { return n(kCirc); }
inline bac::Node pp2() { return n(kPp2); }
inline bac::Node vee() { return n(kVee); }
inline bac::Node tsd() { return n(kTsd); }

inline std::string data_path(const std::string& name) { return std::string(BAC_DATA_DIR) + "/" + name; }

}  // namespace fx

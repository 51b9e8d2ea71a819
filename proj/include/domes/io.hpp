#pragma once

// File formats and run-report plumbing.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "domes/dense_approx.hpp"
#include "domes/geom.hpp"
#include "domes/periodic.hpp"
#include "domes/regular.hpp"
#include "domes/rhombus.hpp"

namespace domes {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class MeshFormat { Obj, Off };

/// "obj" or "off", case-insensitive; anything else is a usage error.
MeshFormat parse_mesh_format(std::string_view name);
/// Format from the file extension.
MeshFormat mesh_format_of(const std::string& path);

// Curves: {"vertices": [[x,y,z],...], "lengths": [...]}; lengths are optional.
Json curve_to_json(const IntegralCurve& c);
/// Structural errors name the offending field. Does not validate lengths.
IntegralCurve curve_from_json(const Json& j);
/// Reads and validates; a validation failure reports the first failing edge.
IntegralCurve parse_curve(const std::string& path, const Tolerance& tol = {});
void write_curve(const IntegralCurve& c, const std::string& path);

// Meshes. Coordinates are written with 17 significant digits.
std::string mesh_to_string(const TriSurface& s, MeshFormat format);
TriSurface mesh_from_string(const std::string& text, MeshFormat format);
void export_mesh(const TriSurface& s, const std::string& path, MeshFormat format);
void export_mesh(const TriSurface& s, const std::string& path);
TriSurface import_mesh(const std::string& path);

Json to_json(const Point3& p);
Point3 point_from_json(const Json& j, const std::string& field);

Json to_json(const FlipPlan& plan);
FlipPlan flip_plan_from_json(const Json& j);
Json to_json(const NgonPlan& plan);
Json to_json(const ApproxLog& log);
Json to_json(const DomeVerdict& v);
Json to_json(const FlexReport& r);
Json to_json(const GramMatrix& g);

Json to_json(const PeriodicSurface& p);
PeriodicSurface periodic_from_json(const Json& j);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t h);

}  // namespace domes

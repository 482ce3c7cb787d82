#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "nitsche/mesh.hpp"

namespace nitsche {

/// Plain-text mesh format:
///
///     <node count>
///     x y                      (one line per node, global numbering)
///     <triangle count>
///     i j k subdomain_id       (zero-based global node indices)
///
/// Several subdomains share one file; their node blocks are concatenated.
void write_meshes(std::ostream& out, std::span<const SubdomainMesh> meshes);
void write_meshes(const std::filesystem::path& path, std::span<const SubdomainMesh> meshes);

/// Reads the format above. Boundary edges are rebuilt (untagged); use
/// retag_boundary() with the subdomain polygon to restore tags.
std::vector<SubdomainMesh> read_meshes(std::istream& in);
std::vector<SubdomainMesh> read_meshes(const std::filesystem::path& path);

}  // namespace nitsche

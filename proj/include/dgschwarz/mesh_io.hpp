#pragma once

#include "dgschwarz/mesh.hpp"
#include "dgschwarz/partition.hpp"

#include <filesystem>
#include <string>

namespace dgschwarz {

/// Mesh files are JSON objects {"vertices": [[x,y],...], "cells": [[i0,i1,...],...]}.
PolytopicMesh read_mesh_json(const std::filesystem::path& path);
void write_mesh_json(const PolytopicMesh& mesh, const std::filesystem::path& path);
std::string mesh_to_json(const PolytopicMesh& mesh);
PolytopicMesh mesh_from_json(const std::string& text);

/// One part index per line; line k holds the part of cell k.
void write_partition_file(const Partition& partition, const std::filesystem::path& path);

}  // namespace dgschwarz

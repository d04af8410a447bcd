#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace diskmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed mesh file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Geometric defect in a mesh; `faces()` lists the offending face indices.
class MeshError : public Error {
public:
    MeshError(const std::string& msg, std::vector<int> faces = {})
        : Error(msg), faces_(std::move(faces)) {}
    const std::vector<int>& faces() const noexcept { return faces_; }

private:
    std::vector<int> faces_;
};

enum class TopologyDefect {
    non_manifold_edge,
    non_manifold_vertex,
    inconsistent_orientation,
    multiple_components,
    not_disk,
};

class TopologyError : public Error {
public:
    TopologyError(TopologyDefect defect, const std::string& msg, std::vector<int> where = {})
        : Error(msg), defect_(defect), where_(std::move(where)) {}
    TopologyDefect defect() const noexcept { return defect_; }
    /// Vertex or face indices involved, depending on the defect.
    const std::vector<int>& where() const noexcept { return where_; }

private:
    TopologyDefect defect_;
    std::vector<int> where_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage failed. `stage()` names the stage; `faces()` carries
/// offending faces when the failure is geometric (e.g. surviving flips).
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& msg, std::vector<int> faces = {})
        : Error(stage + ": " + msg), stage_(std::move(stage)), faces_(std::move(faces)) {}
    const std::string& stage() const noexcept { return stage_; }
    const std::vector<int>& faces() const noexcept { return faces_; }

private:
    std::string stage_;
    std::vector<int> faces_;
};

}  // namespace diskmap

/*
 * Copyright 2026 the rdkit authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RDKIT_MANIFEST_HPP_
#define RDKIT_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rdkit {

/*!
 * \brief Reproducibility record written next to every command's outputs.
 *
 * A manifest pins the command, its arguments (minus the output directory),
 * the seed, digests of every input file, and the out-dir-relative output
 * names. Re-running from a manifest reproduces the outputs byte for byte;
 * nothing time- or locale-dependent is stored.
 */
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // original arguments without --out-dir
  uint64_t seed = 0;
  std::string version;
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> fnv1a64 digest
  std::vector<std::string> outputs;                         // relative to the out dir

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

/*! \brief FNV-1a 64 over a file's bytes, as a fixed-width hex string. */
std::string fnv1a64_file(const std::string& path);

}  // namespace rdkit

#endif  // RDKIT_MANIFEST_HPP_

#pragma once

// Reference propagation logs for the k = 3, 4 closing arguments: one entry per
// block of additions, alternating negative and positive families.

#include <string>
#include <vector>

namespace reference {

struct Proof {
  int n;
  int k;
  unsigned long long t;
  std::vector<std::vector<std::string>> blocks;
  // "INFEASIBLE" or "COUNT <c>"
  std::string ending;
};

inline const std::vector<Proof>& proofs() {
  static const std::vector<Proof> all{
      {11, 3, 45, {
        {"{1,6,11}", "{1,8,10}", "{2,5,11}", "{2,6,10}", "{2,7,9}", "{3,4,11}", "{3,5,9}", "{3,7,8}", "{4,6,8}"},
        {"{4,6,7}", "{4,5,8}", "{3,4,10}"},
      }, "COUNT 56"},
      {13, 3, 66, {
        {"{1,5,13}", "{1,6,12}", "{1,7,11}", "{3,5,12}", "{3,6,10}", "{4,5,11}", "{4,7,9}"},
      }, "INFEASIBLE"},
      {14, 4, 286, {
        {"{1,7,13,14}", "{1,8,12,14}", "{1,9,11,14}", "{2,5,10,14}", "{2,6,9,14}", "{2,6,10,13}", "{2,8,9,13}", "{3,4,11,14}", "{3,5,9,14}", "{3,5,10,13}", "{3,6,8,14}", "{3,6,9,13}", "{3,6,10,12}", "{3,7,8,13}", "{3,7,9,12}", "{4,5,8,14}", "{4,5,9,13}", "{4,6,8,13}", "{4,6,9,12}", "{4,8,10,11}", "{5,7,8,12}", "{5,7,10,11}", "{6,8,9,11}"},
        {"{3,4,7,9}", "{3,4,6,10}", "{2,4,8,10}", "{1,7,8,9}", "{1,6,8,11}", "{1,5,9,11}", "{1,5,7,12}", "{1,4,10,11}", "{1,4,9,12}", "{1,4,8,13}", "{1,4,5,14}", "{1,2,10,13}", "{1,2,8,14}"},
        {"{1,7,12,14}", "{1,8,11,14}", "{2,4,11,14}", "{2,5,9,14}", "{2,5,11,13}", "{2,6,8,14}", "{2,6,9,13}", "{2,7,10,12}", "{3,4,10,14}", "{3,4,12,13}", "{3,5,8,14}", "{3,5,9,13}", "{3,5,10,12}", "{3,6,7,14}", "{3,6,8,13}", "{3,6,9,12}", "{3,7,8,12}", "{3,7,10,11}", "{3,8,9,11}", "{4,5,7,14}", "{4,5,8,13}", "{4,5,9,12}", "{4,6,7,13}", "{4,6,8,12}", "{4,6,9,11}", "{5,7,8,11}"},
        {"{3,5,6,9}", "{3,4,8,10}", "{2,6,7,10}", "{2,5,8,10}", "{2,4,9,10}", "{1,8,9,10}", "{1,7,10,11}", "{1,7,8,13}", "{1,6,9,12}", "{1,5,10,13}", "{1,5,8,14}", "{1,4,10,14}"},
        {"{1,5,12,14}", "{1,6,11,14}", "{1,7,12,13}", "{1,8,10,14}", "{1,8,11,13}", "{2,3,9,14}", "{2,3,10,13}", "{2,4,7,13}", "{2,4,9,12}", "{2,5,6,14}", "{2,5,8,12}", "{2,6,9,11}", "{3,4,6,13}", "{3,4,8,12}", "{3,5,7,12}", "{3,5,8,11}", "{3,6,7,11}", "{3,7,9,10}", "{4,5,6,12}", "{4,5,7,11}", "{4,6,8,10}", "{5,7,8,9}"},
      }, "INFEASIBLE"},
      {15, 4, 364, {
        {"{1,8,14,15}", "{1,9,13,15}", "{1,11,12,15}", "{2,5,11,15}", "{2,6,10,15}", "{2,6,11,14}", "{2,7,9,15}", "{2,7,10,14}", "{2,8,12,13}", "{2,10,11,13}", "{3,4,13,15}", "{3,5,9,15}", "{3,5,10,14}", "{3,6,8,15}", "{3,6,9,14}", "{3,6,10,13}", "{3,8,9,13}", "{3,9,11,12}", "{4,5,12,13}", "{4,6,9,13}", "{4,7,8,14}", "{4,7,10,12}", "{5,6,8,14}", "{5,8,9,12}"},
        {"{3,4,7,10}", "{3,4,6,11}", "{2,4,7,11}", "{1,7,9,12}", "{1,6,8,13}", "{1,5,11,12}", "{1,5,8,14}", "{1,4,11,13}", "{1,4,7,15}", "{1,3,8,15}", "{1,2,11,15}"},
        {"{1,3,13,15}", "{1,4,9,15}", "{1,4,11,14}", "{1,5,8,15}", "{1,5,9,14}", "{1,5,10,13}", "{1,6,8,14}", "{1,6,9,13}", "{1,7,11,12}", "{1,8,10,12}", "{2,3,9,15}", "{2,3,10,14}", "{2,4,8,14}", "{2,4,9,13}", "{2,5,7,14}", "{2,5,8,13}", "{2,5,9,12}", "{2,6,8,12}", "{2,6,10,11}", "{2,7,9,11}", "{3,4,7,15}", "{3,4,10,12}", "{3,5,6,15}", "{3,5,7,13}", "{3,5,8,12}", "{3,5,10,11}", "{3,6,8,11}", "{4,5,9,11}", "{4,6,7,12}", "{4,8,9,10}", "{5,7,9,10}"},
      }, "INFEASIBLE"},
      {17, 4, 560, {
        {"{1,6,16,17}", "{1,7,13,17}", "{1,8,12,17}", "{1,8,15,16}", "{1,9,13,16}", "{2,5,15,17}", "{2,6,12,17}", "{2,6,14,16}", "{2,7,11,17}", "{2,7,12,16}", "{2,8,10,17}", "{2,8,11,16}", "{2,8,13,15}", "{2,9,12,15}", "{3,5,11,17}", "{3,5,13,16}", "{3,6,10,16}", "{3,6,12,15}", "{3,7,9,17}", "{3,7,11,15}", "{3,7,13,14}", "{3,8,10,15}", "{3,8,12,14}", "{3,9,11,14}", "{4,5,10,17}", "{4,5,11,16}", "{4,6,9,17}", "{4,6,11,15}", "{4,6,13,14}", "{4,7,9,16}", "{4,7,10,15}", "{4,7,11,14}", "{4,8,9,15}", "{4,8,10,14}", "{4,9,12,13}", "{5,6,9,16}", "{5,6,10,15}", "{5,6,12,14}", "{5,7,8,17}", "{5,7,9,15}", "{5,7,10,14}", "{5,8,11,13}", "{6,7,12,13}", "{7,9,10,13}"},
        {"{4,6,9,11}", "{4,6,7,13}", "{4,5,10,11}", "{4,5,9,14}", "{4,5,6,15}", "{3,7,9,11}", "{3,6,9,13}", "{3,6,7,14}", "{3,5,11,12}", "{3,5,10,14}", "{3,5,7,15}", "{3,4,11,13}", "{3,4,9,15}", "{3,4,6,16}", "{2,8,10,12}"},
      }, "COUNT 560"},
  };
  return all;
}

}  // namespace reference

#pragma once

namespace uavtrack {

// Defaults are the published defaults of the respective original methods.

struct MosseParams {
  int window = 64;  // filter side, power of two
  double sigma_target = 2.0;
  double learning_rate = 0.125;
  double reg_eps = 1e-5;
  double psr_threshold = 7.0;
  int init_perturbations = 8;

  void validate() const;
};

struct KcfParams {
  double padding = 1.5;  // search area = box * (1 + padding)
  double kernel_sigma = 0.2;
  double lambda = 1e-4;
  double output_sigma_factor = 0.1;
  double interp_factor = 0.075;

  void validate() const;
};

struct MedianFlowParams {
  int grid = 10;
  int pyramid_levels = 3;
  int lk_window = 11;
  int lk_iterations = 20;
  double fb_error_max = 10.0;
  int ncc_patch = 10;

  void validate() const;
};

struct TrackerParams {
  MosseParams mosse;
  KcfParams kcf;
  MedianFlowParams medianflow;
};

}  // namespace uavtrack

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "sklp/dataset.hpp"
#include "sklp/errors.hpp"
#include "sklp/evaluation.hpp"

using namespace sklp;

TEST_CASE("pipeline names") {
  for (const char* name : {"none", "pca", "lda", "sklp", "dm", "sklp+dm"}) {
    CHECK(to_string(pipeline_from_string(name)) == name);
  }
  CHECK_THROWS_AS(pipeline_from_string("ica"), std::invalid_argument);
  CHECK(to_string(classifier_from_string("svm")) == "svm");
}

TEST_CASE("identity pipeline with 1-NN is perfect on well separated data") {
  const LabeledDataset ds = gen_gaussian_classes(3, 12, 4, 0.1, 10.0, 1, 4);
  PipelineConfig cfg;
  cfg.pipeline = Pipeline::none;
  const CvResult r = cross_validate_actions(ds, cfg);
  CHECK(r.accuracy == 1.0);
  CHECK(r.folds.size() == 4);
  CHECK(r.confusion.total() == 12);  // 4 groups x 3 classes
  CHECK(r.frame_confusion.total() == 36);
}

TEST_CASE("every sample is tested exactly once and results are deterministic") {
  const LabeledDataset ds = gen_ring_classes(3, 20, 0.1, 6, 2, 5);
  for (Pipeline p : {Pipeline::pca, Pipeline::lda, Pipeline::sklp, Pipeline::dm, Pipeline::sklp_dm}) {
    PipelineConfig cfg;
    cfg.pipeline = p;
    cfg.sklp.rho = 0.7;
    const CvResult a = cross_validate_actions(ds, cfg);
    CHECK(std::all_of(a.test_visits.begin(), a.test_visits.end(), [](int v) { return v == 1; }));
    CHECK(a.test_visits.size() == ds.size());
    const CvResult b = cross_validate_actions(ds, cfg);
    CHECK(a.confusion.counts == b.confusion.counts);
    CHECK(a.frame_confusion.counts == b.frame_confusion.counts);
    const bool has_sklp = p == Pipeline::sklp || p == Pipeline::sklp_dm;
    CHECK(a.sklp_fits.size() == (has_sklp ? 5u : 0u));
  }
}

TEST_CASE("frame-level scoring without voting") {
  const LabeledDataset ds = gen_gaussian_classes(2, 10, 3, 1.0, 3.0, 3, 5);
  PipelineConfig cfg;
  cfg.pipeline = Pipeline::pca;
  cfg.vote_by_video = false;
  cfg.classifier.kind = ClassifierKind::svm;
  const CvResult r = cross_validate_actions(ds, cfg);
  CHECK(r.confusion.counts == r.frame_confusion.counts);
  CHECK(r.confusion.total() == 20);
}

TEST_CASE("a fold whose training side lacks a class is an error") {
  LabeledDataset ds = gen_gaussian_classes(2, 4, 2, 1.0, 3.0, 4, 2);
  // move every sample of class 1 into group 0
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] == 1) (*ds.groups)[i] = 0;
  }
  PipelineConfig cfg;
  cfg.pipeline = Pipeline::none;
  try {
    cross_validate_actions(ds, cfg);
    FAIL("expected a missing-class error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("g0") != std::string::npos);
  }
}

TEST_CASE("report lists the required sections") {
  const LabeledDataset ds = gen_gaussian_classes(2, 6, 3, 1.0, 3.0, 5, 3);
  PipelineConfig cfg;
  cfg.pipeline = Pipeline::lda;
  const std::string text = format_report(cross_validate_actions(ds, cfg), cfg);
  for (const char* part : {"overall accuracy", "per-class accuracy", "confusion matrix", "per-fold accuracy", "configuration"}) {
    CHECK(text.find(part) != std::string::npos);
  }
}

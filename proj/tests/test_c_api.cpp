/*
Copyright 2026 The PECAN Toolkit Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <cstring>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"
#include "pecan/pecan.h"

namespace {

using nlohmann::json;

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  pecan_string_free(s);
  return out;
}

constexpr const char* kShortRun = R"({"epochs": 20, "hidden_width": 8, "downsample_steps": 5})";

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(pecan_dataset_generate("{}", &data_), PECAN_OK) << pecan_last_error();
    ASSERT_EQ(pecan_model_train(data_, kShortRun, &model_, nullptr), PECAN_OK) << pecan_last_error();
  }
  void TearDown() override {
    pecan_model_free(model_);
    pecan_dataset_free(data_);
  }

  pecan_dataset* data_ = nullptr;
  pecan_model* model_ = nullptr;
};

TEST(CApiLibrary, VersionAndStatusNames) {
  EXPECT_STREQ(pecan_version(), "1.0.0");
  EXPECT_STREQ(pecan_status_name(PECAN_OK), "ok");
  EXPECT_NE(std::strlen(pecan_status_name(PECAN_ERR_NUMERIC)), 0u);
  EXPECT_EQ(pecan_set_log_level("nonsense"), PECAN_ERR_CONFIG);
  EXPECT_EQ(pecan_set_log_level("warn"), PECAN_OK);
}

TEST(CApiLibrary, NullArgumentsAreRejected) {
  pecan_dataset* d = nullptr;
  EXPECT_EQ(pecan_dataset_generate(nullptr, &d), PECAN_ERR_ARGUMENT);
  EXPECT_NE(std::string(pecan_last_error()).find("NULL"), std::string::npos);
  EXPECT_EQ(pecan_dataset_generate("{}", nullptr), PECAN_ERR_ARGUMENT);
  EXPECT_EQ(pecan_dataset_size(nullptr), 0u);
  EXPECT_EQ(pecan_model_d_tau(nullptr), 0u);
  char* out = nullptr;
  EXPECT_EQ(pecan_model_info(nullptr, &out), PECAN_ERR_ARGUMENT);
  // Free functions accept NULL.
  pecan_dataset_free(nullptr);
  pecan_model_free(nullptr);
  pecan_service_free(nullptr);
  pecan_server_free(nullptr);
  pecan_string_free(nullptr);
}

TEST(CApiLibrary, ErrorsCarryTheirStatusAndMessage) {
  pecan_dataset* d = nullptr;
  EXPECT_EQ(pecan_dataset_load("/nonexistent/file.json", &d), PECAN_ERR_IO);
  EXPECT_EQ(d, nullptr);
  EXPECT_NE(std::string(pecan_last_error()).find("/nonexistent/file.json"), std::string::npos);
  EXPECT_EQ(pecan_dataset_from_json("{", &d), PECAN_ERR_PARSE);
  EXPECT_EQ(pecan_dataset_generate(R"({"style_dims": 7})", &d), PECAN_ERR_SPEC);
  // A successful call resets the message.
  ASSERT_EQ(pecan_dataset_generate("{}", &d), PECAN_OK);
  EXPECT_STREQ(pecan_last_error(), "");
  pecan_dataset_free(d);
}

TEST(CApiLibrary, DatasetRoundtrip) {
  pecan_dataset* d = nullptr;
  ASSERT_EQ(pecan_dataset_load(PECAN_FIXTURES "/driving_train_16.json", &d), PECAN_OK);
  EXPECT_EQ(pecan_dataset_size(d), 16u);
  EXPECT_EQ(pecan_dataset_num_labels(d), 4u);
  char* text = nullptr;
  ASSERT_EQ(pecan_dataset_to_json(d, &text), PECAN_OK);
  pecan_dataset* back = nullptr;
  ASSERT_EQ(pecan_dataset_from_json(text, &back), PECAN_OK);
  pecan_string_free(text);
  EXPECT_EQ(pecan_dataset_size(back), 16u);
  char* diag = nullptr;
  ASSERT_EQ(pecan_dataset_diagnose(back, 2.0, &diag), PECAN_OK);
  EXPECT_TRUE(json::parse(take(diag)).contains("separation_ok"));
  pecan_dataset_free(back);
  pecan_dataset_free(d);
}

TEST(CApiLibrary, DivergedTrainingIsANumericError) {
  pecan_dataset* d = nullptr;
  ASSERT_EQ(pecan_dataset_generate("{}", &d), PECAN_OK);
  pecan_model* m = nullptr;
  EXPECT_EQ(pecan_model_train(d, R"({"epochs": 3, "learning_rate": 1e300})", &m, nullptr), PECAN_ERR_NUMERIC);
  EXPECT_EQ(m, nullptr);
  EXPECT_EQ(pecan_model_train(d, R"({"epochs": 3, "colour": 1})", &m, nullptr), PECAN_ERR_PARSE);
  pecan_dataset_free(d);
}

TEST_F(CApi, TrainingReportsHistoryAndShapes) {
  pecan_model* m = nullptr;
  char* history = nullptr;
  ASSERT_EQ(pecan_model_train(data_, kShortRun, &m, &history), PECAN_OK);
  const auto h = json::parse(take(history));
  ASSERT_EQ(h.size(), 20u);
  EXPECT_EQ(h[0].size(), 3u);
  EXPECT_EQ(pecan_model_d_tau(m), 2u);
  EXPECT_EQ(pecan_model_d_theta(m), 2u);
  // Same seed, same bytes.
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(pecan_model_to_json(m, &a), PECAN_OK);
  ASSERT_EQ(pecan_model_to_json(model_, &b), PECAN_OK);
  EXPECT_EQ(take(a), take(b));
  pecan_model_free(m);
}

TEST_F(CApi, CheckpointFilesRoundtrip) {
  const auto path = std::filesystem::temp_directory_path() / "pecan_c_api_model.json";
  ASSERT_EQ(pecan_model_save(model_, path.c_str()), PECAN_OK);
  pecan_model* back = nullptr;
  ASSERT_EQ(pecan_model_load(path.c_str(), &back), PECAN_OK);
  char* a = nullptr;
  char* b = nullptr;
  pecan_model_info(model_, &a);
  pecan_model_info(back, &b);
  EXPECT_EQ(take(a), take(b));
  pecan_model_free(back);
  std::filesystem::remove(path);
}

TEST_F(CApi, EncodeAndEvaluate) {
  char* enc = nullptr;
  ASSERT_EQ(pecan_model_encode(model_, data_, &enc), PECAN_OK);
  const auto e = json::parse(take(enc));
  EXPECT_EQ(e["task"].size(), 16u);
  EXPECT_EQ(e["style"][0].size(), 2u);
  pecan_dataset* eval = nullptr;
  ASSERT_EQ(pecan_dataset_generate(R"({"split": "eval", "label_mode": "none"})", &eval), PECAN_OK);
  char* report = nullptr;
  ASSERT_EQ(pecan_model_evaluate(model_, eval, &report), PECAN_OK) << pecan_last_error();
  EXPECT_EQ(json::parse(take(report))["n_eval"], 352);
  pecan_dataset_free(eval);
}

TEST_F(CApi, DecodeMatchesTheServiceBody) {
  const double z[] = {0.3, -0.7};
  char* body = nullptr;
  ASSERT_EQ(pecan_model_decode(model_, 1, z, 2, &body), PECAN_OK);
  const std::string direct = take(body);

  pecan_service* svc = nullptr;
  ASSERT_EQ(pecan_service_create(model_, &svc), PECAN_OK);
  int status = 0;
  char* out = nullptr;
  ASSERT_EQ(pecan_service_handle(svc, "POST", "/decode", R"({"task_id": 1, "z": [0.3, -0.7]})", &status, &out), PECAN_OK);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(take(out), direct);

  ASSERT_EQ(pecan_service_handle(svc, "POST", "/decode", R"({"task_id": 1, "z": [1.5, 0]})", &status, &out), PECAN_OK);
  EXPECT_EQ(status, 400);
  EXPECT_EQ(json::parse(take(out))["error"]["field"], "z[0]");

  const double far[] = {1.5, 0.0};
  EXPECT_EQ(pecan_model_decode(model_, 1, far, 2, &body), PECAN_ERR_DOMAIN);
  EXPECT_EQ(pecan_model_decode(model_, 1, nullptr, 2, &body), PECAN_ERR_ARGUMENT);
  pecan_service_free(svc);
}

TEST_F(CApi, ServerAnswersOverHttp) {
  pecan_service* svc = nullptr;
  ASSERT_EQ(pecan_service_create(model_, &svc), PECAN_OK);
  pecan_server* server = nullptr;
  int port = 0;
  ASSERT_EQ(pecan_server_start(svc, "127.0.0.1", 0, &server, &port), PECAN_OK) << pecan_last_error();
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  const auto r = client.Get("/model");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body)["d_theta"], 2);
  pecan_server* second = nullptr;
  EXPECT_EQ(pecan_server_start(svc, "127.0.0.1", port, &second, nullptr), PECAN_ERR_IO);
  pecan_server_stop(server);
  pecan_server_wait(server);
  pecan_server_free(server);
  pecan_service_free(svc);
}

TEST(CApiExperiment, UnknownPlanIsAConfigError) {
  char* out = nullptr;
  EXPECT_EQ(pecan_experiment_run(R"({"name": "everything"})", nullptr, &out), PECAN_ERR_CONFIG);
  EXPECT_EQ(out, nullptr);
  EXPECT_EQ(pecan_experiment_run("[", nullptr, &out), PECAN_ERR_PARSE);
}

}  // namespace

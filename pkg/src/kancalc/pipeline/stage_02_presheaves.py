from kancalc.config.configuration import ConfigurationManager
from kancalc.components.harness import run_suite, save_suite_result
from kancalc import logger

STAGE_NAME = "Presheaf stage"

class PresheafPipeline:
    """Kan extensions, elements, limits and colimits of Set-valued functors"""
    SUITES = ("kan", "elements")

    def __init__(self, metrics=None, workers=None):
        self.metrics = metrics
        self.workers = workers

    def main(self):
        config = ConfigurationManager()
        results = []
        for suite in self.SUITES:
            harness_config = config.get_harness_config(suite, workers=self.workers)
            report_dir = config.prepare_report_dir(harness_config)
            result = run_suite(harness_config, metrics=self.metrics)
            save_suite_result(result, report_dir)
            logger.info(f"suite {suite}: {result.passed}/{result.instances} passed")
            results.append(result)
        return results

if __name__ == '__main__':
    try:
        logger.info(f">>>>>> stage {STAGE_NAME} started <<<<<<")
        obj = PresheafPipeline()
        obj.main()
        logger.info(f">>>>>> stage {STAGE_NAME} completed <<<<<<\n\nx==========x")
    except Exception as e:
        logger.exception(e)
        raise e

from kancalc import logger
from kancalc.pipeline.stage_01_order_theory import OrderTheoryPipeline
from kancalc.pipeline.stage_02_presheaves import PresheafPipeline
from kancalc.pipeline.stage_03_filtered import FilteredPipeline
from kancalc.pipeline.stage_04_grothendieck import GrothendieckPipeline
from kancalc.pipeline.stage_05_ind_objects import IndObjectPipeline
from kancalc.config.configuration import ConfigurationManager
from kancalc.observability.metrics import CalcMetrics
from kancalc.observability.logging_config import setup_logging
from kancalc.observability.tracing import tracer

# Setup observability
metrics_config = ConfigurationManager().get_metrics_config()
setup_logging(log_dir=metrics_config.log_dir)
tracer.enabled = metrics_config.tracing
metrics = CalcMetrics()
if metrics_config.enabled:
    metrics.start_metrics_server(metrics_config.port)

STAGES = [
    ("Order theory stage", OrderTheoryPipeline),
    ("Presheaf stage", PresheafPipeline),
    ("Filteredness stage", FilteredPipeline),
    ("Grothendieck construction stage", GrothendieckPipeline),
    ("Ind-object stage", IndObjectPipeline),
]

failed = []
for STAGE_NAME, pipeline in STAGES:
    try:
        logger.info(f">>>>>> stage {STAGE_NAME} started <<<<<<")
        results = pipeline(metrics=metrics).main()
        failed += [r.suite for r in results if not r.ok]
        logger.info(f">>>>>> stage {STAGE_NAME} completed <<<<<<\n\nx==========x")
    except Exception as e:
        logger.exception(e)
        raise e

if failed:
    logger.error(f"counterexamples found in: {', '.join(failed)}")
    raise SystemExit(1)

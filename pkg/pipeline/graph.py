import logging
from langgraph.graph import StateGraph, END
from pipeline.state import RunState
from pipeline.nodes import (
    load_config_node,
    build_game_node,
    execute_command_node,
    write_outputs_node,
    should_continue
)

logger = logging.getLogger(__name__)

def create_run_graph() -> StateGraph:
    """Creates and compiles the LangGraph for one configuration-driven run."""
    logger.info("Creating run pipeline graph...")

    workflow = StateGraph(RunState)

    workflow.add_node("load_config", load_config_node)
    workflow.add_node("build_game", build_game_node)
    workflow.add_node("execute_command", execute_command_node)
    workflow.add_node("write_outputs", write_outputs_node)

    workflow.set_entry_point("load_config")
    workflow.add_conditional_edges(
        "load_config",
        should_continue,
        {"continue": "build_game", "end": END}
    )
    # validate stops here
    workflow.add_conditional_edges(
        "build_game",
        should_continue,
        {"continue": "execute_command", "end": END}
    )
    # errors still pass through write_outputs so the exit code is set in one place
    workflow.add_edge("execute_command", "write_outputs")
    workflow.add_edge("write_outputs", END)

    app = workflow.compile()
    logger.info("Run pipeline graph compiled successfully.")
    return app

# --- Get the compiled graph instance ---
run_app = create_run_graph()

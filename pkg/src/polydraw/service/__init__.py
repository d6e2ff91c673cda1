from .app import SchlegelSession, SpringSession, create_app

__all__ = ["SchlegelSession", "SpringSession", "create_app"]

"""随包发布的 JSON Schema。"""

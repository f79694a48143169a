from django.urls import path

from . import views

urlpatterns = [
    path("health/", views.health_check, name="health_check"),
    path("api/charseq/", views.charseq, name="api_charseq"),
    path("api/matrix/", views.matrix, name="api_matrix"),
    path("api/graph/", views.graph, name="api_graph"),
]
